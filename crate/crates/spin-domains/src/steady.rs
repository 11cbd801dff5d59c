//! Closed-form steady states of the collective decay, their block weights,
//! and derived observables.
//!
//! At zero temperature every block relaxes onto its dark state |j_i; -j_i>,
//! and the block weight set by the initial state is conserved, so the steady
//! state is the diagonal mixture of block bottoms with the initial
//! Clebsch-Gordan weights. Closed forms for the polarizations exist for
//! n_b = 1 and 2; everything else is computed through the basis conversion.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::entanglement::{log_negativity, von_neumann_entropy, BipartiteDims};
use crate::error::{Error, Result};
use crate::state::{
    initial_block_amplitudes, observable_jz, to_tensor_product, Basis, BlockLayout, CMatrix,
    DensityMatrix, Domain,
};

/// Steady state plus its derived observables.
#[derive(Clone, Debug)]
pub struct SteadyStateReport {
    pub n_a: u32,
    pub n_b: u32,
    /// Block weights P_i, in block order (largest j first); they sum to 1.
    pub weights: Vec<f64>,
    pub jz_a: f64,
    pub jz_b: f64,
    pub negativity: f64,
    pub entropy: f64,
    rho_ss: DensityMatrix,
}

impl SteadyStateReport {
    /// The steady-state matrix in the direct-sum basis.
    pub fn rho_ss(&self) -> &DensityMatrix {
        &self.rho_ss
    }

    /// Serialize the observable fields as JSON.
    pub fn to_json(&self) -> String {
        let json = SteadyStateJson {
            n_a: self.n_a,
            n_b: self.n_b,
            weights: self.weights.clone(),
            jz_a: self.jz_a,
            jz_b: self.jz_b,
            negativity: self.negativity,
            entropy: self.entropy,
        };
        serde_json::to_string_pretty(&json).expect("steady-state serialization")
    }
}

#[derive(Serialize, Deserialize)]
struct SteadyStateJson {
    n_a: u32,
    n_b: u32,
    weights: Vec<f64>,
    jz_a: f64,
    jz_b: f64,
    negativity: f64,
    entropy: f64,
}

/// Steady-state density matrix in the direct-sum basis: weights `P_i` on the
/// block bottoms |j_i; -j_i>.
pub fn steady_state_matrix(layout: &BlockLayout) -> DensityMatrix {
    let weights = steady_state_weights(layout);
    let dim = layout.dim();
    let mut data = CMatrix::zeros(dim, dim);
    for (block, w) in weights.iter().enumerate() {
        let p = layout.bottom_index(block);
        data[(p, p)] = Complex64::new(*w, 0.0);
    }
    DensityMatrix::new(data, Basis::DirectSum(layout.clone()))
        .expect("diagonal matrix matches layout")
}

/// Block weights of the steady state: the squared Clebsch-Gordan amplitudes
/// of the anti-parallel initial state, one per block.
pub fn steady_state_weights(layout: &BlockLayout) -> Vec<f64> {
    initial_block_amplitudes(layout)
        .into_iter()
        .map(|c| c * c)
        .collect()
}

/// Full steady-state report for the anti-parallel initial configuration.
pub fn steady_state(layout: &BlockLayout) -> Result<SteadyStateReport> {
    report_from_state(steady_state_matrix(layout))
}

/// Observables of a direct-sum (near-)steady state; the weights are read off
/// the block-bottom diagonal. Used by the numeric long-time-integration path
/// as well as the closed form.
pub fn report_from_state(rho_ss: DensityMatrix) -> Result<SteadyStateReport> {
    let layout = rho_ss
        .layout()
        .ok_or(Error::WrongBasis {
            expected: "direct_sum",
            found: "tensor_product",
        })?
        .clone();
    let weights: Vec<f64> = (0..layout.num_blocks())
        .map(|b| {
            let p = layout.bottom_index(b);
            rho_ss.data()[(p, p)].re
        })
        .collect();
    let tp = to_tensor_product(&rho_ss)?;
    let dims = BipartiteDims::for_domains(layout.n_a(), layout.n_b());
    Ok(SteadyStateReport {
        n_a: layout.n_a(),
        n_b: layout.n_b(),
        weights,
        jz_a: observable_jz(&tp, Domain::A)?,
        jz_b: observable_jz(&tp, Domain::B)?,
        negativity: log_negativity(&tp, dims)?,
        entropy: von_neumann_entropy(&rho_ss)?,
        rho_ss,
    })
}

/// Printed closed-form steady-state polarizations, available for n_b = 1
/// and n_b = 2.
pub fn polarization_closed_form(n_a: u32, n_b: u32, domain: Domain) -> Result<f64> {
    let n = n_a as f64;
    match (n_b, domain) {
        (1, Domain::A) => Ok(-(n / 2.0) * ((n + 1.0).powi(2) - 2.0) / (n + 1.0).powi(2)),
        (1, Domain::B) => Ok(((n - 1.0).powi(2) - 2.0) / (2.0 * (n + 1.0).powi(2))),
        (2, Domain::A) => {
            let numerator =
                n.powi(5) + 5.0 * n.powi(4) + 4.0 * n.powi(3) - 16.0 * n * n - 8.0 * n + 16.0;
            Ok(-numerator / (2.0 * n * (n + 1.0) * (n + 2.0).powi(2)))
        }
        (2, Domain::B) => {
            let numerator = n * (n + 1.0) * (n * n - 12.0) + 8.0;
            Ok(numerator / (n * (n + 1.0) * (n + 2.0).powi(2)))
        }
        _ => Err(Error::UnsupportedClosedForm { n_b }),
    }
}

/// Smallest n_a whose steady state leaves domain B with positive
/// polarization, found by scanning `steady_state` observables upward.
///
/// Terminates because the B polarization approaches n_b / 2 as n_a grows.
pub fn negative_temperature_threshold(n_b: u32) -> Result<u32> {
    const SCAN_CAP: u32 = 10_000;
    let mut n_a = n_b.max(1);
    loop {
        let layout = BlockLayout::for_domains(n_a, n_b)?;
        let rho_tp = to_tensor_product(&steady_state_matrix(&layout))?;
        if observable_jz(&rho_tp, Domain::B)? > 0.0 {
            return Ok(n_a);
        }
        n_a += 1;
        assert!(n_a <= SCAN_CAP, "threshold scan ran away for n_b = {n_b}");
    }
}
