//! Exhaustive search for Chatterjea maps with constant in [1/3, 1/2) that
//! are not generalized Chatterjea, over small rational grids.
//!
//! cargo run --release --example open_problem -- [max_points] [grid values...]

use contraction_lab::search::{run_search, verify_witness, GoalKind, SearchGoal, Strategy};
use contraction_lab::scalar::parse_rational;

fn main() {
    let mut args = std::env::args().skip(1);
    let max_points: usize = args.next().and_then(|a| a.parse().ok()).unwrap_or(3);
    let mut grid: Vec<_> = args.filter_map(|a| parse_rational(&a)).collect();
    if grid.is_empty() {
        grid = ["1", "2", "3", "4"].iter().filter_map(|v| parse_rational(v)).collect();
    }

    for n in 3..=max_points {
        let goal = SearchGoal { kind: GoalKind::OpenProblem, n_range: n..=n, strategy: Strategy::Exhaustive { grid: grid.clone() } };
        let mut shown = 0;
        let summary = run_search(&goal, 50_000_000, true, |w| {
            assert!(verify_witness(w));
            if shown < 3 {
                println!("{}", serde_json::to_string(w).expect("serializable"));
                shown += 1;
            }
        })
        .expect("valid goal");
        println!("{}", serde_json::to_string(&summary).expect("serializable"));
    }
}
