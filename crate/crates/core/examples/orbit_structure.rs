//! Fixed points, prime periods, orbits and asymptotic regularity.
//!
//! cargo run --example orbit_structure

use contraction_lab::selfmap::{all_maps, prime_period_two_witness};
use contraction_lab::{fixed_points, is_asymptotically_regular, orbit, prime_period, SelfMap};

fn describe(name: &str, f: &SelfMap) {
    println!("{name} {:?}", f.images());
    println!("  fixed points {:?}", fixed_points(f));
    let periods: Vec<Option<usize>> = (0..f.len()).map(|i| prime_period(f, i)).collect();
    println!("  prime periods {periods:?}");
    println!("  period-2 witness {:?}", prime_period_two_witness(f));
    for start in 0..f.len() {
        let o = orbit(f, start);
        println!("  orbit from {start}: tail {:?}, cycle {:?}", o.tail, o.cycle);
    }
    println!("  asymptotically regular: {}", is_asymptotically_regular(f));
}

fn main() {
    describe("two fixed points", &SelfMap::new(vec![0, 1, 1]).expect("in range"));
    describe("swap", &SelfMap::new(vec![1, 0, 2]).expect("in range"));
    describe("3-cycle", &SelfMap::cyclic_shift(3));
    describe("constant", &SelfMap::constant(4, 2));

    // Regular maps never have periodic points of period 2 or more.
    let n = 4;
    let regular = all_maps(n).filter(is_asymptotically_regular).count();
    let cycle_free = all_maps(n).filter(|f| (0..n).all(|i| prime_period(f, i).is_none_or(|p| p == 1))).count();
    println!("maps on {n} points: {} total, {regular} asymptotically regular, {cycle_free} without cycles", n.pow(n as u32));
}
