//! The brute-force generator also handles a thermal reservoir. Block weights
//! stay pinned to their initial values at any temperature, but within each
//! block the populations thermalize instead of collapsing onto the dark
//! state.
//!
//! Run with: cargo run --release --example finite_temperature_oracle

use spin_domains::oracle::{build_liouvillian, steady_state_oracle};
use spin_domains::state::{from_tensor_product, initial_state_tensor_product, BlockLayout};

fn main() {
    let (n_a, n_b) = (3u32, 1u32);
    let layout = BlockLayout::for_domains(n_a, n_b).unwrap();
    let rho0 = initial_state_tensor_product(n_a, n_b).unwrap();

    for nbar in [0.0, 0.25, 1.0] {
        let liouvillian = build_liouvillian(n_a, n_b, 1.0, nbar).unwrap();
        let steady = steady_state_oracle(&liouvillian, &rho0).unwrap();
        let ds = from_tensor_product(&steady).unwrap();
        println!("nbar = {nbar}:");
        for block in layout.blocks() {
            let weight: f64 = (block.offset..block.offset + block.len)
                .map(|p| ds.data()[(p, p)].re)
                .sum();
            let populations: Vec<String> = (block.offset..block.offset + block.len)
                .map(|p| format!("{:.4}", ds.data()[(p, p)].re))
                .collect();
            println!(
                "  block j = {}: weight {weight:.6}, populations [{}]",
                block.j,
                populations.join(", ")
            );
        }
        println!();
    }
    println!("block weights 1/4 and 3/4 persist at every temperature;");
    println!("only the zero-temperature limit empties everything but the dark states.");
}
