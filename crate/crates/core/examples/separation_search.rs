//! Exhaustive search on 3-point spaces with distances in {1, 4} for maps
//! that are generalized Chatterjea but not Chatterjea, and for maps with
//! two fixed points that satisfy both fixed point hypotheses.
//!
//! cargo run --example separation_search

use contraction_lab::num_rational::BigRational;
use contraction_lab::search::dedupe_key;
use contraction_lab::{run_search, verify_witness, FiniteMetricSpace, GoalKind, SearchGoal, SelfMap, Strategy};

fn main() {
    let grid: Vec<BigRational> = [1, 4].map(|v| BigRational::from_integer(v.into())).to_vec();
    let rows = [[0, 1, 4], [1, 0, 4], [4, 4, 0]]
        .map(|r| r.map(|v| BigRational::from_integer(v.into())).to_vec())
        .to_vec();
    let reference = dedupe_key(
        &FiniteMetricSpace::from_rows(rows, 0.0).expect("a metric"),
        &SelfMap::new(vec![0, 1, 1]).expect("in range"),
    );

    for kind in [GoalKind::SeparateGenCFromC, GoalKind::TwoFixedPoints] {
        let goal = SearchGoal { kind, n_range: 3..=3, strategy: Strategy::Exhaustive { grid: grid.clone() } };
        let summary = run_search(&goal, 1_000_000, true, |w| {
            let same = dedupe_key(&w.space, &w.map) == reference;
            println!(
                "{kind}: sides {:?}, map {:?}, c_C = {}, c_G = {}, certificate ok {}{}",
                w.space.distance_multiset().iter().map(ToString::to_string).collect::<Vec<_>>(),
                w.map.images(),
                w.report.constant(contraction_lab::ContractionClass::Chatterjea),
                w.report.constant(contraction_lab::ContractionClass::GeneralizedChatterjea),
                verify_witness(w),
                if same { "  <- the reference instance, up to relabeling" } else { "" }
            );
        })
        .expect("valid goal");
        println!("{}", serde_json::to_string_pretty(&summary).expect("serializable"));
    }
}
