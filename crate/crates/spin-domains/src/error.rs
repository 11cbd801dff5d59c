//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A (j, m) pair that is not a valid angular-momentum state.
    #[error("invalid quantum numbers: j = {j}, m = {m} ({reason})")]
    InvalidQuantumNumbers {
        j: String,
        m: String,
        reason: &'static str,
    },

    /// Domain sizes violate n_a >= n_b >= 1.
    #[error("invalid domain sizes: n_a = {n_a}, n_b = {n_b} (need n_a >= n_b >= 1)")]
    DomainSizes { n_a: u32, n_b: u32 },

    /// An operation received a density matrix in the wrong basis.
    #[error("wrong basis: expected {expected}, found {found}")]
    WrongBasis {
        expected: &'static str,
        found: &'static str,
    },

    /// Matrix dimensions do not match the declared bipartition or layout.
    #[error("dimension mismatch: {context} (expected {expected}, found {found})")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    /// Input expected to be Hermitian deviates beyond tolerance.
    #[error("matrix is not Hermitian: max |m - m^dag| = {deviation:.3e}")]
    NotHermitian { deviation: f64 },

    /// A state has an eigenvalue too far below zero to be a density matrix.
    #[error("invalid state: minimum eigenvalue {min_eigenvalue:.3e} below -1e-8")]
    InvalidState { min_eigenvalue: f64 },

    /// The fixed-step integrator lost trace conservation.
    #[error(
        "integration unstable at t_tilde = {t:.6}: trace drift {drift:.3e} exceeds 1e-6; \
         reduce the step size (current step {step:.3e})"
    )]
    StepInstability { t: f64, drift: f64, step: f64 },

    /// Brute-force superoperator dimension guard.
    #[error("system dimension {dim} exceeds the superoperator guard of {max}")]
    DimensionGuard { dim: usize, max: usize },

    /// Long-time evolution did not reach a stationary point.
    #[error(
        "no steady state after t_tilde = {t_end}: residual {residual:.3e} above {tolerance:.3e}"
    )]
    NoConvergence {
        t_end: f64,
        residual: f64,
        tolerance: f64,
    },

    /// Closed forms are only printed for n_b in {1, 2}.
    #[error("no closed-form polarization for n_b = {n_b}; use steady_state + observable_jz")]
    UnsupportedClosedForm { n_b: u32 },

    /// Invalid evolution parameters.
    #[error("invalid evolution parameters: {reason}")]
    InvalidParams { reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
