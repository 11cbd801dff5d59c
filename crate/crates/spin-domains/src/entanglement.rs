//! Partial transpose, trace norm, logarithmic negativity, and von Neumann
//! entropy for bipartite states of the two collective spins.

use nalgebra::linalg::SymmetricEigen;

use crate::error::{Error, Result};
use crate::linalg;
use crate::state::{Basis, CMatrix, DensityMatrix};

/// Bipartite split (d_a, d_b) = (n_a + 1, n_b + 1) of the tensor-product
/// space, A-major ordering.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct BipartiteDims {
    pub d_a: usize,
    pub d_b: usize,
}

impl BipartiteDims {
    pub fn for_domains(n_a: u32, n_b: u32) -> Self {
        BipartiteDims {
            d_a: n_a as usize + 1,
            d_b: n_b as usize + 1,
        }
    }

    pub fn total(self) -> usize {
        self.d_a * self.d_b
    }
}

/// Subsystem selector for the partial transpose.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Subsystem {
    A,
    B,
}

/// Partial transpose of a tensor-product density matrix over one subsystem:
/// (rho^Gamma_A)_{(a,b),(a',b')} = rho_{(a',b),(a,b')}.
///
/// The two transposes have identical spectra, being mutual full transposes.
pub fn partial_transpose(
    rho: &DensityMatrix,
    dims: BipartiteDims,
    subsystem: Subsystem,
) -> Result<CMatrix> {
    if !matches!(rho.basis(), Basis::TensorProduct { .. }) {
        return Err(Error::WrongBasis {
            expected: "tensor_product",
            found: "direct_sum",
        });
    }
    if dims.total() != rho.dim() {
        return Err(Error::DimensionMismatch {
            context: "bipartite dims vs matrix",
            expected: rho.dim(),
            found: dims.total(),
        });
    }
    let data = rho.data();
    let d_b = dims.d_b;
    let mut out = CMatrix::zeros(rho.dim(), rho.dim());
    for a in 0..dims.d_a {
        for b in 0..d_b {
            for a2 in 0..dims.d_a {
                for b2 in 0..d_b {
                    let (row, col) = (a * d_b + b, a2 * d_b + b2);
                    let (src_row, src_col) = match subsystem {
                        Subsystem::A => (a2 * d_b + b, a * d_b + b2),
                        Subsystem::B => (a * d_b + b2, a2 * d_b + b),
                    };
                    out[(row, col)] = data[(src_row, src_col)];
                }
            }
        }
    }
    Ok(out)
}

/// Trace norm ||X||_1 = sum of |eigenvalue| for a Hermitian matrix.
pub fn trace_norm(m: &CMatrix) -> Result<f64> {
    let dev = linalg::hermiticity_deviation(m);
    if dev > 1e-10 {
        return Err(Error::NotHermitian { deviation: dev });
    }
    Ok(SymmetricEigen::new(m.clone())
        .eigenvalues
        .iter()
        .map(|l| l.abs())
        .sum())
}

/// Logarithmic negativity log2 ||rho^Gamma_A||_1.
///
/// Values within 1e-12 below zero are clamped to zero.
pub fn log_negativity(rho: &DensityMatrix, dims: BipartiteDims) -> Result<f64> {
    let pt = partial_transpose(rho, dims, Subsystem::A)?;
    let value = trace_norm(&pt)?.log2();
    if value < 0.0 && value > -1e-12 {
        Ok(0.0)
    } else {
        Ok(value)
    }
}

/// Closed-form logarithmic negativity of the n_b = 1 steady state:
/// log2[(sqrt(4N^3 + (N+1)^2) + N^2 + N) / (N+1)^2].
pub fn negativity_closed_form_nb1(n_a: u32) -> f64 {
    let n = n_a as f64;
    let square = (n + 1.0) * (n + 1.0);
    (((4.0 * n.powi(3) + square).sqrt() + n * n + n) / square).log2()
}

/// Von Neumann entropy -sum lambda log2 lambda over the eigenvalues, with
/// 0 log 0 = 0.
///
/// Eigenvalues in [-1e-12, 0] are treated as zero so integrator round-off
/// cannot poison the logarithm; anything below -1e-8 is an invalid state.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    let eigenvalues = SymmetricEigen::new(rho.data().clone()).eigenvalues;
    let mut entropy = 0.0;
    for &l in eigenvalues.iter() {
        if l < -1e-8 {
            return Err(Error::InvalidState { min_eigenvalue: l });
        }
        if l > 0.0 {
            entropy -= l * l.log2();
        }
    }
    Ok(entropy)
}

/// Entropy of the n_b = 1 steady state from its two nonzero eigenvalues
/// 1/(N+1) and N/(N+1).
pub fn entropy_closed_form_nb1(n_a: u32) -> f64 {
    let n = n_a as f64;
    let p = 1.0 / (n + 1.0);
    -(p * p.log2() + n * p * (n * p).log2())
}
