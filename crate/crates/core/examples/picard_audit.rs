//! Picard iteration with the rate-bound audit along a long orbit.
//!
//! Points 1, r, r^2, ... on a line (plus 0) with each point sent one step
//! toward 0. The orbit from 1 visits every point, so the step, power and
//! Cauchy bounds are checked at every index, exactly.
//!
//! cargo run --example picard_audit -- [points] [1/r]

use contraction_lab::num_rational::BigRational;
use contraction_lab::{picard_solve, FiniteMetricSpace, SelfMap};

fn main() {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().and_then(|a| a.parse().ok()).unwrap_or(7);
    let inv_r: i64 = args.next().and_then(|a| a.parse().ok()).unwrap_or(10);

    let mut pos: Vec<BigRational> = Vec::new();
    let mut p = BigRational::from_integer(1.into());
    for _ in 0..n - 1 {
        pos.push(p.clone());
        p /= BigRational::from_integer(inv_r.into());
    }
    pos.push(BigRational::from_integer(0.into()));
    let rows = pos.iter().map(|a| pos.iter().map(|b| if a > b { a - b } else { b - a }).collect()).collect();
    let space = FiniteMetricSpace::from_rows(rows, 0.0).expect("points on a line");
    let map = SelfMap::new((0..n).map(|i| (i + 1).min(n - 1)).collect()).expect("in range");

    let report = picard_solve(&space, &map, 0).expect("valid start");
    let h = &report.hypotheses;
    println!("no prime period 2: {}", h.no_prime_period_two);
    println!("gamma = {} (below 1/3: {})", h.gamma, h.generalized_chatterjea);
    println!("orbit {:?}, fixed point {:?} after {} steps", report.trace.iterates, report.fixed_point, report.steps);
    let a: Vec<String> = report.trace.a.iter().map(ToString::to_string).collect();
    println!("consecutive distances a_1.. = [{}]", a.join(", "));

    match &report.bound_audit {
        Some(audit) => {
            println!("alpha = {}, a = {}", audit.alpha, audit.a_cap);
            for s in &audit.steps {
                println!("  n = {}: step bound {}, power bound {}", s.n, s.step_bound, s.power_bound);
            }
            let held = audit.cauchy.iter().filter(|c| c.holds).count();
            println!("  cauchy tail bounds: {held} of {} hold", audit.cauchy.len());
        }
        None => println!("no audit: the hypotheses fail or the orbit is too short"),
    }
}
