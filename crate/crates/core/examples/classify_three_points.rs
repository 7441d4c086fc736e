//! Classifies the map x -> x, y -> y, z -> y on the space with
//! d(x,y) = 1, d(x,z) = d(y,z) = 4, in exact arithmetic.
//!
//! The map is generalized Chatterjea (constant 2/11) but not Chatterjea
//! (constant 1/2), and the oracle accepts any gamma from 2/11 upwards.
//!
//! cargo run --example classify_three_points

use contraction_lab::num_rational::BigRational;
use contraction_lab::{classify_all, membership_oracle, ContractionClass, FiniteMetricSpace, SelfMap};

fn q(num: i64, den: i64) -> BigRational {
    BigRational::new(num.into(), den.into())
}

fn main() {
    let rows = [[0, 1, 4], [1, 0, 4], [4, 4, 0]].map(|r| r.map(|v| q(v, 1)).to_vec()).to_vec();
    let space = FiniteMetricSpace::from_rows(rows, 0.0)
        .and_then(|s| s.with_labels(Some(vec!["x".into(), "y".into(), "z".into()])))
        .expect("a metric");
    let map = SelfMap::new(vec![0, 1, 1]).expect("in range");

    let report = classify_all(&space, &map).expect("three points");
    for v in report.verdicts() {
        let argmax: Vec<String> = v.argmax.iter().map(|&i| space.label(i)).collect();
        println!(
            "{:<22} constant {:<5} member {:<5} attained at ({})",
            v.class.name(),
            v.constant.to_string(),
            v.member,
            argmax.join(", ")
        );
    }

    let class = ContractionClass::GeneralizedChatterjea;
    for gamma in [q(1, 11), q(2, 11), q(3, 11)] {
        let ok = membership_oracle(&space, &map, class, &gamma).expect("three points");
        println!("oracle {class} at gamma = {gamma}: {ok}");
    }
}
