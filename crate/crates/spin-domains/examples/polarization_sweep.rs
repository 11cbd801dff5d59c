//! Steady-state polarization of the smaller domain as a function of the
//! larger domain size: past a threshold the common reservoir leaves domain B
//! with more population in its excited states than its ground states.
//!
//! Run with: cargo run --release --example polarization_sweep

use spin_domains::state::{BlockLayout, Domain};
use spin_domains::steady::{
    negative_temperature_threshold, polarization_closed_form, steady_state,
};

fn main() {
    for n_b in [1u32, 2, 3] {
        println!("n_b = {n_b}:");
        println!("  n_a    <Jz_B>        <Jz_A>");
        for n_a in n_b..=12 {
            let layout = BlockLayout::for_domains(n_a, n_b).unwrap();
            let report = steady_state(&layout).unwrap();
            let marker = if report.jz_b > 0.0 {
                "  <- inverted"
            } else {
                ""
            };
            println!(
                "  {n_a:3}   {:+.6}   {:+.6}{marker}",
                report.jz_b, report.jz_a
            );
        }
        let threshold = negative_temperature_threshold(n_b).unwrap();
        println!("  first inversion at n_a = {threshold}\n");
    }

    // The printed closed forms agree with the numeric pipeline.
    println!("closed form vs numeric at n_a = 7:");
    for (n_b, domain, label) in [(1, Domain::B, "n_b=1 B"), (2, Domain::B, "n_b=2 B")] {
        let closed = polarization_closed_form(7, n_b, domain).unwrap();
        let layout = BlockLayout::for_domains(7, n_b).unwrap();
        let numeric = steady_state(&layout).unwrap().jz_b;
        println!("  {label}: closed {closed:+.12}, numeric {numeric:+.12}");
    }
}
