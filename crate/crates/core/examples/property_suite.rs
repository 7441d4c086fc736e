//! Runs the randomized property suite and prints what each check covered.
//!
//! cargo run --release --example property_suite -- [trials] [seed]

use std::time::Instant;

use contraction_lab::props::{run_suite, Property};

fn main() {
    let mut args = std::env::args().skip(1);
    let trials: u64 = args.next().and_then(|a| a.parse().ok()).unwrap_or(10_000);
    let seed: u64 = args.next().and_then(|a| a.parse().ok()).unwrap_or(42);

    let t = Instant::now();
    let summary = run_suite(seed, trials, trials / 10);
    let elapsed = t.elapsed();

    for (name, tally) in [("float", &summary.float), ("exact", &summary.exact)] {
        println!("{name} corpus: {} instances", tally.instances);
        println!("  both fixed point hypotheses hold: {}", tally.hypotheses_hold);
        println!("  orbits solved / audited:          {} / {}", tally.orbits_solved, tally.orbits_audited);
        println!("  rate-bound checks:                {}", tally.audit_checks);
        println!("  c_C < 1/3:                        {}", tally.chatterjea_antecedent);
        println!("  c_P < 1/2:                        {}", tally.perimeter_antecedent);
        println!(
            "  1/4 <= c_P < 1/2 (of which c_G >= 1/3): {} ({})",
            tally.perimeter_quarter_band, tally.perimeter_band_not_generalized
        );
        println!("  c_K < 1:                          {}", tally.gen_kannan_antecedent);
        println!("  asymptotically regular:           {}", tally.asymptotically_regular);
        println!("  oracle comparisons:               {}", tally.oracle_checks);
    }
    for p in Property::ALL {
        println!("{p:<32} {} violations", summary.violation_count(p));
    }
    println!("elapsed {:.2?}", elapsed);
}
