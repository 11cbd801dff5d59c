//! Brute-force verification path: the full Lindblad superoperator on the
//! tensor-product collective space, propagated with a matrix exponential.
//!
//! This is the ground truth the reduced block equations are checked against.
//! It shares nothing with the dynamics module beyond the ladder matrix
//! elements: the generator is
//!
//! ```text
//! gamma (nbar + 1) [2 J rho J+ - J+ J rho - rho J+ J]
//!   + gamma nbar   [2 J+ rho J - J J+ rho - rho J J+]
//! ```
//!
//! with J the collective lowering operator of both domains, vectorized in
//! the column-stacking convention: vec(A X B) = (B^T (x) A) vec(X).

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::angular::{ladder_element, Ladder, SpinQuantum};
use crate::error::{Error, Result};
use crate::half::Half;
use crate::state::{Basis, CMatrix, DensityMatrix};

/// Largest tensor-product dimension the dense superoperator accepts.
pub const DIMENSION_GUARD: usize = 512;

/// Dense Lindblad superoperator for the common-reservoir collective decay.
pub struct Liouvillian {
    matrix: DMatrix<f64>,
    n_a: u32,
    n_b: u32,
    gamma: f64,
    nbar: f64,
}

impl Liouvillian {
    /// The D^2 x D^2 superoperator matrix (real for this model).
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        (self.n_a as usize + 1) * (self.n_b as usize + 1)
    }

    pub fn domain_sizes(&self) -> (u32, u32) {
        (self.n_a, self.n_b)
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn nbar(&self) -> f64 {
        self.nbar
    }

    /// max |L vec(rho)|; zero for stationary states.
    pub fn residual(&self, rho: &DensityMatrix) -> f64 {
        let (re, im) = split_vec(rho.data());
        let dre = &self.matrix * re;
        let dim = &self.matrix * im;
        dre.iter()
            .zip(dim.iter())
            .map(|(r, i)| Complex64::new(*r, *i).norm())
            .fold(0.0, f64::max)
    }
}

/// Collective spin lowering matrix for one domain of n spin-1/2 particles,
/// basis ordered by descending m.
fn lowering_matrix(n: u32) -> DMatrix<f64> {
    let j = Half::from_doubled(n as i32);
    let dim = j.multiplicity();
    let mut out = DMatrix::zeros(dim, dim);
    for col in 0..dim {
        let m = j - Half::from_int(col as i32);
        if m > -j {
            let state = SpinQuantum::new(j, m).expect("ladder state");
            out[(col + 1, col)] = ladder_element(state, Ladder::Lower);
        }
    }
    out
}

/// Assemble the vectorized Lindblad generator for two domains coupled to the
/// common reservoir with mean occupation `nbar`.
pub fn build_liouvillian(n_a: u32, n_b: u32, gamma: f64, nbar: f64) -> Result<Liouvillian> {
    if n_b < 1 || n_a < n_b {
        return Err(Error::DomainSizes { n_a, n_b });
    }
    if !(gamma.is_finite() && gamma > 0.0) || !(nbar.is_finite() && nbar >= 0.0) {
        return Err(Error::InvalidParams {
            reason: format!("gamma = {gamma}, nbar = {nbar}"),
        });
    }
    let d_a = n_a as usize + 1;
    let d_b = n_b as usize + 1;
    let dim = d_a * d_b;
    if dim > DIMENSION_GUARD {
        return Err(Error::DimensionGuard {
            dim,
            max: DIMENSION_GUARD,
        });
    }

    let eye_a = DMatrix::<f64>::identity(d_a, d_a);
    let eye_b = DMatrix::<f64>::identity(d_b, d_b);
    let eye = DMatrix::<f64>::identity(dim, dim);
    let lower = lowering_matrix(n_a).kronecker(&eye_b) + eye_a.kronecker(&lowering_matrix(n_b));
    let raise = lower.transpose();

    let dissipator = |jump: &DMatrix<f64>| -> DMatrix<f64> {
        let jump_dag = jump.transpose();
        let number = &jump_dag * jump;
        2.0 * jump.kronecker(jump) - eye.kronecker(&number) - number.transpose().kronecker(&eye)
    };

    // vec(2 J rho J+) = 2 (J+)^T (x) J vec(rho) = 2 J (x) J vec(rho) for the
    // real ladder matrices used here.
    let mut matrix = dissipator(&lower) * (gamma * (nbar + 1.0));
    if nbar > 0.0 {
        matrix += dissipator(&raise) * (gamma * nbar);
    }

    Ok(Liouvillian {
        matrix,
        n_a,
        n_b,
        gamma,
        nbar,
    })
}

fn check_state(l: &Liouvillian, rho: &DensityMatrix) -> Result<()> {
    match rho.basis() {
        Basis::TensorProduct { n_a, n_b } if (*n_a, *n_b) == (l.n_a, l.n_b) => Ok(()),
        Basis::TensorProduct { .. } => Err(Error::DimensionMismatch {
            context: "state vs Liouvillian domains",
            expected: l.dim(),
            found: rho.dim(),
        }),
        Basis::DirectSum(_) => Err(Error::WrongBasis {
            expected: "tensor_product",
            found: "direct_sum",
        }),
    }
}

fn split_vec(rho: &CMatrix) -> (nalgebra::DVector<f64>, nalgebra::DVector<f64>) {
    // nalgebra stores column-major, so iteration order is the
    // column-stacking vectorization.
    let re = nalgebra::DVector::from_iterator(rho.len(), rho.iter().map(|z| z.re));
    let im = nalgebra::DVector::from_iterator(rho.len(), rho.iter().map(|z| z.im));
    (re, im)
}

fn join_vec(dim: usize, re: &nalgebra::DVector<f64>, im: &nalgebra::DVector<f64>) -> CMatrix {
    CMatrix::from_iterator(
        dim,
        dim,
        re.iter()
            .zip(im.iter())
            .map(|(r, i)| Complex64::new(*r, *i)),
    )
}

/// Propagate a tensor-product state to dimensionless time `t` with the
/// matrix exponential of the generator (scaling-and-squaring).
///
/// Time is measured as t_tilde = gamma * t, matching the reduced engine.
pub fn evolve_oracle(l: &Liouvillian, rho0: &DensityMatrix, t: f64) -> Result<DensityMatrix> {
    check_state(l, rho0)?;
    if t == 0.0 {
        return Ok(rho0.clone());
    }
    if t < 0.0 {
        return Err(Error::InvalidParams {
            reason: format!("negative evolution time {t}"),
        });
    }
    // matrix is the physical-time generator; t_tilde = gamma t means
    // exp(L t) = exp((matrix / gamma) * t_tilde).
    let propagator = expm(&(&l.matrix * (t / l.gamma)));
    let (re, im) = split_vec(rho0.data());
    let data = join_vec(l.dim(), &(&propagator * re), &(&propagator * im));
    DensityMatrix::new(data, rho0.basis().clone())
}

/// Stationary state reached from `rho0`, by long-time evolution.
///
/// The generator conserves the total-spin block weights at every
/// temperature, so its null space is degenerate and the stationary limit
/// depends on the initial state; extraction must be seeded by `rho0`.
/// Errors with a residual diagnostic if max |L vec(rho)| has not dropped
/// below 1e-10 by t_tilde = 200.
pub fn steady_state_oracle(l: &Liouvillian, rho0: &DensityMatrix) -> Result<DensityMatrix> {
    const TOLERANCE: f64 = 1e-10;
    const T_MAX: f64 = 200.0;
    const CHUNK: f64 = 10.0;

    check_state(l, rho0)?;
    let mut state = rho0.clone();
    let mut residual = l.residual(&state);
    let mut t = 0.0;
    // One propagator per chunk, reused across the whole crawl.
    let mut propagator: Option<DMatrix<f64>> = None;
    while residual > TOLERANCE {
        if t >= T_MAX {
            return Err(Error::NoConvergence {
                t_end: T_MAX,
                residual,
                tolerance: TOLERANCE,
            });
        }
        let step = propagator.get_or_insert_with(|| expm(&(&l.matrix * (CHUNK / l.gamma))));
        let (re, im) = split_vec(state.data());
        let data = join_vec(l.dim(), &(&*step * re), &(&*step * im));
        state = DensityMatrix::new(data, rho0.basis().clone())?;
        t += CHUNK;
        residual = l.residual(&state);
    }
    Ok(state)
}

/// Matrix exponential by scaling-and-squaring with a Pade(13) approximant.
pub(crate) fn expm(a: &DMatrix<f64>) -> DMatrix<f64> {
    const THETA_13: f64 = 5.371_920_351_148_152;
    #[rustfmt::skip]
    const B: [f64; 14] = [
        64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
        1187353796428800.0, 129060195264000.0, 10559470521600.0,
        670442572800.0, 33522128640.0, 1323241920.0, 40840800.0,
        960960.0, 16380.0, 182.0, 1.0,
    ];

    let dim = a.nrows();
    debug_assert_eq!(dim, a.ncols());
    let norm = one_norm(a);
    let squarings = if norm > THETA_13 {
        (norm / THETA_13).log2().ceil() as u32
    } else {
        0
    };
    let scaled = a / 2f64.powi(squarings as i32);

    let eye = DMatrix::<f64>::identity(dim, dim);
    let a2 = &scaled * &scaled;
    let a4 = &a2 * &a2;
    let a6 = &a2 * &a4;

    let u_inner = &a6 * (B[13] * &a6 + B[11] * &a4 + B[9] * &a2)
        + B[7] * &a6
        + B[5] * &a4
        + B[3] * &a2
        + B[1] * &eye;
    let u = &scaled * u_inner;
    let v = &a6 * (B[12] * &a6 + B[10] * &a4 + B[8] * &a2)
        + B[6] * &a6
        + B[4] * &a4
        + B[2] * &a2
        + B[0] * &eye;

    let denominator = &v - &u;
    let numerator = &v + &u;
    let mut result = denominator
        .lu()
        .solve(&numerator)
        .expect("Pade denominator is invertible for scaled input");
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}

fn one_norm(a: &DMatrix<f64>) -> f64 {
    (0..a.ncols())
        .map(|c| a.column(c).iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}
