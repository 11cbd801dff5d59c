//! Closed-form steady states and their observables for a few domain sizes.
//!
//! Run with: cargo run --release --example steady_state_report

use spin_domains::state::BlockLayout;
use spin_domains::steady::steady_state;

fn main() {
    for (n_a, n_b) in [(1u32, 1u32), (3, 1), (5, 1), (3, 2), (5, 3)] {
        let layout = BlockLayout::for_domains(n_a, n_b).unwrap();
        let report = steady_state(&layout).unwrap();
        println!("n_a = {n_a}, n_b = {n_b}");
        println!("  block weights: {:?}", report.weights);
        println!(
            "  <Jz_A> = {:+.6}   <Jz_B> = {:+.6}",
            report.jz_a, report.jz_b
        );
        println!(
            "  log-negativity = {:.6}   entropy = {:.6}",
            report.negativity, report.entropy
        );
        if report.jz_b > 0.0 {
            println!("  domain B holds a population inversion at this size");
        }
        println!();
    }
    println!("full JSON report for n_a = 5, n_b = 1:");
    let layout = BlockLayout::for_domains(5, 1).unwrap();
    println!("{}", steady_state(&layout).unwrap().to_json());
}
