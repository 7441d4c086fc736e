//! Building, validating, repairing and enumerating finite metric spaces.
//!
//! cargo run --example metric_spaces

use contraction_lab::metric::{enumerate_grid_spaces, gen_lattice_cloud, random_raw_matrix, DEFAULT_GRID_CEILING};
use contraction_lab::num_rational::BigRational;
use contraction_lab::{gen_euclidean, metric_repair, validate, FiniteMetricSpace, Norm, RawDistanceMatrix};

fn main() {
    // A matrix that breaks the triangle inequality, and its repair.
    let raw = RawDistanceMatrix::from_rows(vec![vec![0.0, 1.0, 3.0], vec![1.0, 0.0, 1.0], vec![3.0, 1.0, 0.0]])
        .expect("square");
    match validate(raw.clone(), 1e-9) {
        Ok(_) => println!("unexpectedly valid"),
        Err(e) => println!("validate: {} ({e})", e.name()),
    }
    let repaired = metric_repair(raw).expect("positive entries");
    println!("repaired:\n{repaired}");

    // Random symmetric matrices repair to metrics that validate with no slack.
    let space = metric_repair(random_raw_matrix(6, 0.1, 1.0, 3)).expect("positive entries");
    println!("repaired random 6-point space validates: {}", validate(space.to_raw(), 0.0).is_ok());

    let cloud = gen_euclidean(2, 4, 7, Norm::L2);
    println!("4 points in the plane:\n{cloud}");

    let lattice = gen_lattice_cloud(2, 4, 6, false, 1);
    println!("4 lattice points under L1 (exact):\n{lattice}");

    // Every metric on 3 points with distances in {1, 2}.
    let grid: Vec<BigRational> = [1, 2].map(|v| BigRational::from_integer(v.into())).to_vec();
    let spaces: Vec<FiniteMetricSpace<BigRational>> =
        enumerate_grid_spaces(3, &grid, DEFAULT_GRID_CEILING).expect("small grid").collect();
    println!("{} of 8 side assignments from {{1, 2}} are metrics:", spaces.len());
    for s in &spaces {
        let sides: Vec<String> = s.distance_multiset().iter().map(ToString::to_string).collect();
        println!("  sides {}  (d01 d02 d12 = {} {} {})", sides.join(" "), s.dist(0, 1), s.dist(0, 2), s.dist(1, 2));
    }
}
