//! Zero-temperature equations of motion in the direct-sum basis and their
//! fixed-step integration, plus the closed-form element solutions used as
//! test oracles.
//!
//! For an element at (block i, m) x (block l, m'), with
//! A(j, m) = sqrt((j - m)(j + m + 1)) and B(j, m) = (j + m)(j - m + 1):
//!
//! ```text
//! d/dt rho = 2 gamma A(j_i, m) A(j_l, m') rho_{(i, m+1), (l, m'+1)}
//!            - gamma [B(j_i, m) + B(j_l, m')] rho_{(i, m), (l, m')}
//! ```
//!
//! The feeding term is dropped when m + 1 > j_i or m' + 1 > j_l. The same
//! expression covers diagonal blocks (i = l) and coherence blocks (i != l)
//! for any domain sizes.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::angular::{ladder_element, Ladder, SpinQuantum};
use crate::error::{Error, Result};
use crate::state::{Basis, BlockLayout, CMatrix, DensityMatrix, Trajectory};

/// Parameters of a fixed-step integration in dimensionless time.
#[derive(Clone, Copy, Debug)]
pub struct EvolutionParams {
    /// Damping rate; trajectories are reported against t_tilde = gamma * t,
    /// so this only relabels physical time.
    pub gamma: f64,
    /// End of the run in t_tilde.
    pub t_end: f64,
    /// Integrator step in t_tilde.
    pub step: f64,
    /// Keep every `sample_every`-th step (the final step is always kept).
    pub sample_every: usize,
}

/// Step size keeping the fastest rate (which grows linearly with n_a) well
/// resolved: 1e-3 * min(1, 1/n_a).
pub fn recommended_step(n_a: u32) -> f64 {
    1e-3 * (1.0 / n_a as f64).min(1.0)
}

impl EvolutionParams {
    /// Defaults for a system of n_a spins: recommended step, roughly two
    /// thousand retained samples.
    pub fn new(t_end: f64, n_a: u32) -> Self {
        let step = recommended_step(n_a);
        let n_steps = (t_end / step).ceil() as usize;
        EvolutionParams {
            gamma: 1.0,
            t_end,
            step,
            sample_every: (n_steps / 2000).max(1),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if !positive(self.gamma) {
            return Err(Error::InvalidParams {
                reason: format!("gamma = {} must be positive", self.gamma),
            });
        }
        if !(self.t_end.is_finite() && self.t_end >= 0.0) {
            return Err(Error::InvalidParams {
                reason: format!("t_end = {} must be non-negative", self.t_end),
            });
        }
        if !positive(self.step) {
            return Err(Error::InvalidParams {
                reason: format!("step = {} must be positive", self.step),
            });
        }
        if self.sample_every == 0 {
            return Err(Error::InvalidParams {
                reason: "sample_every must be at least 1".into(),
            });
        }
        Ok(())
    }
}

/// Precomputed coefficient tables of the equations of motion for one layout.
pub struct EomOperator {
    dim: usize,
    /// B(j_i, m_p) + B(j_l, m_q) per element.
    decay: DMatrix<f64>,
    /// A(j_i, m_p) * A(j_l, m_q) per element; zero when either index sits at
    /// the top of its block, so the feeding read of (p-1, q-1) is masked.
    feed: DMatrix<f64>,
}

impl EomOperator {
    pub fn new(layout: &BlockLayout) -> Self {
        let dim = layout.dim();
        let mut b_coeff = vec![0.0; dim];
        let mut a_coeff = vec![0.0; dim];
        let mut at_top = vec![false; dim];
        for p in 0..dim {
            let (_, j, m) = layout.coords(p);
            let state = SpinQuantum::new(j, m).expect("layout yields valid states");
            b_coeff[p] = ladder_element(state, Ladder::Lower).powi(2);
            a_coeff[p] = ladder_element(state, Ladder::Raise);
            at_top[p] = m == j;
        }
        let decay = DMatrix::from_fn(dim, dim, |p, q| b_coeff[p] + b_coeff[q]);
        let feed = DMatrix::from_fn(dim, dim, |p, q| {
            if at_top[p] || at_top[q] {
                0.0
            } else {
                a_coeff[p] * a_coeff[q]
            }
        });
        EomOperator { dim, decay, feed }
    }

    /// Write gamma * (2 feed . shifted rho - decay . rho) into `out`.
    pub fn apply_into(&self, rho: &CMatrix, gamma: f64, out: &mut CMatrix) {
        debug_assert_eq!(rho.nrows(), self.dim);
        for q in 0..self.dim {
            for p in 0..self.dim {
                let feed = self.feed[(p, q)];
                let fed = if feed != 0.0 {
                    rho[(p - 1, q - 1)] * (2.0 * feed)
                } else {
                    Complex64::new(0.0, 0.0)
                };
                out[(p, q)] = (fed - rho[(p, q)] * self.decay[(p, q)]) * gamma;
            }
        }
    }

    pub fn apply(&self, rho: &CMatrix, gamma: f64) -> CMatrix {
        let mut out = CMatrix::zeros(self.dim, self.dim);
        self.apply_into(rho, gamma, &mut out);
        out
    }

    /// Largest |d rho / d t_tilde| entry; the steady-state residual.
    pub fn max_derivative(&self, rho: &CMatrix) -> f64 {
        self.apply(rho, 1.0)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }
}

/// Time derivative of a direct-sum density matrix under the zero-temperature
/// collective decay.
pub fn eom_rhs(rho: &DensityMatrix, gamma: f64) -> Result<CMatrix> {
    let layout = rho.layout().ok_or(Error::WrongBasis {
        expected: "direct_sum",
        found: "tensor_product",
    })?;
    Ok(EomOperator::new(layout).apply(rho.data(), gamma))
}

/// Classical fourth-order fixed-step integration of the equations of motion
/// in dimensionless time.
///
/// Aborts with a step-size diagnostic if the trace drifts by more than 1e-6.
pub fn integrate(rho0: &DensityMatrix, params: &EvolutionParams) -> Result<Trajectory> {
    params.validate()?;
    let layout = rho0.layout().ok_or(Error::WrongBasis {
        expected: "direct_sum",
        found: "tensor_product",
    })?;
    let basis = Basis::DirectSum(layout.clone());
    let op = EomOperator::new(layout);
    let dim = layout.dim();

    let n_steps = if params.t_end == 0.0 {
        0
    } else {
        (params.t_end / params.step).ceil().max(1.0) as usize
    };
    let h = if n_steps == 0 {
        0.0
    } else {
        params.t_end / n_steps as f64
    };

    let mut times = vec![0.0];
    let mut states = vec![rho0.clone()];

    let mut rho = rho0.data().clone();
    let mut k1 = CMatrix::zeros(dim, dim);
    let mut k2 = CMatrix::zeros(dim, dim);
    let mut k3 = CMatrix::zeros(dim, dim);
    let mut k4 = CMatrix::zeros(dim, dim);
    let mut stage = CMatrix::zeros(dim, dim);

    for step_idx in 1..=n_steps {
        // The evolution is autonomous and linear in gamma; stepping t_tilde
        // with unit rate is exact for every gamma.
        op.apply_into(&rho, 1.0, &mut k1);
        set_stage(&mut stage, &rho, &k1, 0.5 * h);
        op.apply_into(&stage, 1.0, &mut k2);
        set_stage(&mut stage, &rho, &k2, 0.5 * h);
        op.apply_into(&stage, 1.0, &mut k3);
        set_stage(&mut stage, &rho, &k3, h);
        op.apply_into(&stage, 1.0, &mut k4);

        let w = Complex64::new(h / 6.0, 0.0);
        for idx in 0..rho.len() {
            rho[idx] += w * (k1[idx] + (k2[idx] + k3[idx]) * 2.0 + k4[idx]);
        }

        if step_idx % params.sample_every == 0 || step_idx == n_steps {
            let t = h * step_idx as f64;
            let drift = (rho.trace() - Complex64::new(1.0, 0.0)).norm();
            if drift > 1e-6 {
                return Err(Error::StepInstability { t, drift, step: h });
            }
            times.push(t);
            states.push(DensityMatrix::new(rho.clone(), basis.clone())?);
        }
    }

    Ok(Trajectory::new(times, states))
}

fn set_stage(stage: &mut CMatrix, rho: &CMatrix, k: &CMatrix, weight: f64) {
    let w = Complex64::new(weight, 0.0);
    for idx in 0..stage.len() {
        stage[idx] = rho[idx] + w * k[idx];
    }
}

/// Integrate until the steady-state residual max |d rho| drops below `tol`,
/// sampling the residual once per unit of dimensionless time.
///
/// Errors with the final residual if `t_max` is reached first.
pub fn evolve_to_steady(
    rho0: &DensityMatrix,
    tol: f64,
    t_max: f64,
) -> Result<(DensityMatrix, f64)> {
    let layout = rho0.layout().ok_or(Error::WrongBasis {
        expected: "direct_sum",
        found: "tensor_product",
    })?;
    let op = EomOperator::new(layout);
    let n_a = layout.n_a();
    let mut current = rho0.clone();
    let mut t = 0.0;
    let mut residual = op.max_derivative(current.data());
    while residual > tol {
        if t >= t_max {
            return Err(Error::NoConvergence {
                t_end: t_max,
                residual,
                tolerance: tol,
            });
        }
        let chunk = 1.0_f64.min(t_max - t);
        let params = EvolutionParams {
            gamma: 1.0,
            t_end: chunk,
            step: recommended_step(n_a),
            sample_every: usize::MAX,
        };
        current = integrate(&current, &params)?.last().clone();
        t += chunk;
        residual = op.max_derivative(current.data());
    }
    Ok((current, t))
}

/// Closed-form single-element solutions for the anti-parallel initial state.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum AnalyticElement {
    /// n_b = 1, second diagonal of the larger block:
    /// exp(-4 N t) / (N + 1).
    Rho22Nb1,
    /// n_b = 1, coherence (2, N+3) between the block tops of the populated
    /// level: (sqrt(N) / (N + 1)) exp(-(3N - 1) t).
    CoherenceNb1,
    /// n_b = 2, third diagonal of the largest block:
    /// 2 exp(-6 N t) / ((N + 1)(N + 2)).
    Rho33Nb2,
}

/// Evaluate a closed-form element at dimensionless time `t`.
pub fn analytic_element(kind: AnalyticElement, n_a: u32, t: f64) -> f64 {
    let n = n_a as f64;
    match kind {
        AnalyticElement::Rho22Nb1 => (-4.0 * n * t).exp() / (n + 1.0),
        AnalyticElement::CoherenceNb1 => n.sqrt() / (n + 1.0) * (-(3.0 * n - 1.0) * t).exp(),
        AnalyticElement::Rho33Nb2 => 2.0 * (-6.0 * n * t).exp() / ((n + 1.0) * (n + 2.0)),
    }
}
