//! The direct-sum and tensor-product pictures of the same state, connected
//! by the Clebsch-Gordan change of basis.
//!
//! Run with: cargo run --release --example basis_conversion

use spin_domains::angular::clebsch_gordan;
use spin_domains::half::Half;
use spin_domains::state::{
    basis_change_matrix, from_tensor_product, initial_state, to_tensor_product, BlockLayout,
};

fn main() {
    let (n_a, n_b) = (2u32, 1u32);
    let layout = BlockLayout::for_domains(n_a, n_b).unwrap();

    // The anti-parallel product state spreads over one m level of each block.
    let rho = initial_state(&layout);
    println!("anti-parallel state in the direct-sum basis (nonzero entries):");
    for i in 0..layout.dim() {
        for j in 0..layout.dim() {
            let v = rho.data()[(i, j)].re;
            if v != 0.0 {
                println!("  rho_{}_{} = {v:+.6}", i + 1, j + 1);
            }
        }
    }

    // The change of basis is orthogonal; its entries are CG coefficients.
    let u = basis_change_matrix(&layout);
    let gram = u.transpose() * &u;
    let max_dev = (gram - nalgebra::DMatrix::<f64>::identity(layout.dim(), layout.dim()))
        .abs()
        .max();
    println!("\nchange-of-basis orthogonality deviation: {max_dev:.2e}");

    // One coefficient spelled out: <m_A = 1, m_B = -1/2 | j = 3/2; m = 1/2>.
    let c = clebsch_gordan(
        Half::from_int(1),
        Half::from_doubled(1),
        Half::from_int(1),
        Half::from_doubled(-1),
        Half::from_doubled(3),
        Half::from_doubled(1),
    )
    .unwrap();
    println!(
        "<1, -1/2 | 3/2; 1/2> = {c:.6} (sqrt(1/3) = {:.6})",
        (1.0f64 / 3.0).sqrt()
    );

    // Round trip through the tensor-product picture.
    let tp = to_tensor_product(&rho).unwrap();
    println!("\ntensor-product diagonal (A-major, m descending):");
    for p in 0..tp.dim() {
        let v = tp.data()[(p, p)].re;
        if v.abs() > 1e-14 {
            println!("  index {}: {v:.6}", p + 1);
        }
    }
    let back = from_tensor_product(&tp).unwrap();
    let round_trip = (back.data() - rho.data()).map(|z| z.norm()).max();
    println!("\nround-trip deviation: {round_trip:.2e}");

    println!("\nserialized direct-sum form:\n{}", rho.to_json());
}
