//! Collective relaxation of the anti-parallel configuration: the populated
//! level of each total-spin block cascades down to the block bottom, at
//! rates that grow with the domain size.
//!
//! Run with: cargo run --release --example relaxation_dynamics

use spin_domains::dynamics::{integrate, recommended_step, EvolutionParams};
use spin_domains::state::{initial_state, BlockLayout};

fn main() {
    let (n_a, n_b) = (4, 1);
    let layout = BlockLayout::for_domains(n_a, n_b).unwrap();
    let rho0 = initial_state(&layout);

    println!(
        "domains: n_a = {n_a}, n_b = {n_b}; reduced dimension {}",
        layout.dim()
    );
    println!("blocks:");
    for block in layout.blocks() {
        println!(
            "  block {} with j = {}: flat indices {}..={}",
            block.index + 1,
            block.j,
            block.offset + 1,
            block.offset + block.len
        );
    }

    let params = EvolutionParams {
        gamma: 1.0,
        t_end: 4.0,
        step: recommended_step(n_a),
        sample_every: 2000,
    };
    let trajectory = integrate(&rho0, &params).unwrap();

    // Diagonal populations of both blocks: the block weights 1/(N+1) and
    // N/(N+1) end up on the dark states (indices 6 and 10, 1-based).
    println!("\n  t      rho_2_2   rho_6_6   rho_7_7   rho_10_10   trace");
    for (t, rho) in trajectory.times().iter().zip(trajectory.states()) {
        let d = rho.data();
        println!(
            "{t:5.2}   {:.5}   {:.5}   {:.5}   {:.5}     {:.9}",
            d[(1, 1)].re,
            d[(5, 5)].re,
            d[(6, 6)].re,
            d[(9, 9)].re,
            d.trace().re
        );
    }
    println!("\nexpected end points: rho_6_6 -> 1/5 = 0.2, rho_10_10 -> 4/5 = 0.8");
}
