//! Cross-check of the reduced block equations against the brute-force
//! Liouvillian: the two engines share only the ladder matrix elements, so
//! agreement at 1e-8 validates the direct-sum reduction end to end.
//!
//! Run with: cargo run --release --example oracle_verification

use spin_domains::dynamics::{integrate, recommended_step, EvolutionParams};
use spin_domains::oracle::{build_liouvillian, evolve_oracle, steady_state_oracle};
use spin_domains::state::{
    from_tensor_product, initial_state, initial_state_tensor_product, to_tensor_product,
    BlockLayout,
};
use spin_domains::steady::steady_state_matrix;

fn main() {
    println!("trajectory equivalence (Frobenius distance, reduced vs oracle):");
    for (n_a, n_b) in [(3u32, 1u32), (4, 1), (3, 2), (4, 2)] {
        let layout = BlockLayout::for_domains(n_a, n_b).unwrap();
        let liouvillian = build_liouvillian(n_a, n_b, 1.0, 0.0).unwrap();
        let rho0_tp = initial_state_tensor_product(n_a, n_b).unwrap();
        print!("  ({n_a},{n_b}):");
        for t in [0.1, 0.5, 1.0, 5.0] {
            let params = EvolutionParams {
                gamma: 1.0,
                t_end: t,
                step: recommended_step(n_a),
                sample_every: usize::MAX,
            };
            let reduced = integrate(&initial_state(&layout), &params).unwrap();
            let reduced_tp = to_tensor_product(reduced.last()).unwrap();
            let oracle = evolve_oracle(&liouvillian, &rho0_tp, t).unwrap();
            let distance = (reduced_tp.data() - oracle.data())
                .map(|z| z.norm_sqr())
                .sum()
                .sqrt();
            print!("  t={t}: {distance:.2e}");
        }
        println!();
    }

    println!("\nstationary limit from the oracle vs predicted dark-state mixture:");
    for (n_a, n_b) in [(2u32, 1u32), (3, 2), (4, 3)] {
        let layout = BlockLayout::for_domains(n_a, n_b).unwrap();
        let liouvillian = build_liouvillian(n_a, n_b, 1.0, 0.0).unwrap();
        let rho0_tp = initial_state_tensor_product(n_a, n_b).unwrap();
        let steady = steady_state_oracle(&liouvillian, &rho0_tp).unwrap();
        let ds = from_tensor_product(&steady).unwrap();
        let predicted = steady_state_matrix(&layout);
        let residual = (ds.data() - predicted.data()).map(|z| z.norm()).max();
        println!(
            "  ({n_a},{n_b}): max residual {residual:.2e}, generator residual {:.2e}",
            liouvillian.residual(&steady)
        );
    }
}
