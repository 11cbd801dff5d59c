//! Angular-momentum primitives: Clebsch-Gordan coefficients, ladder-operator
//! matrix elements, and the direct-sum decomposition of two coupled
//! collective spins.
//!
//! Phase convention is Condon-Shortley throughout: all coefficients are real
//! and, for fixed (j1, j2, j, m), the coefficient with the largest `m1` is
//! positive.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::half::Half;

/// A single angular-momentum state (j, m).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SpinQuantum {
    j: Half,
    m: Half,
}

impl SpinQuantum {
    /// Validates j >= 0, |m| <= j, and that 2j and 2m share parity.
    pub fn new(j: Half, m: Half) -> Result<Self> {
        if j.doubled() < 0 {
            return Err(invalid(j, m, "j must be non-negative"));
        }
        if !j.same_parity(m) {
            return Err(invalid(j, m, "2j and 2m must have the same parity"));
        }
        if m.abs() > j {
            return Err(invalid(j, m, "|m| must not exceed j"));
        }
        Ok(SpinQuantum { j, m })
    }

    pub fn j(self) -> Half {
        self.j
    }

    pub fn m(self) -> Half {
        self.m
    }
}

fn invalid(j: Half, m: Half, reason: &'static str) -> Error {
    Error::InvalidQuantumNumbers {
        j: j.to_string(),
        m: m.to_string(),
        reason,
    }
}

/// Direction of a ladder operator.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Ladder {
    Raise,
    Lower,
}

/// Matrix element sqrt(j(j+1) - m(m +/- 1)) of J^+/J^- out of |j, m>.
///
/// Zero at the top of the ladder for `Raise` and at the bottom for `Lower`.
pub fn ladder_element(state: SpinQuantum, direction: Ladder) -> f64 {
    let j = state.j.value();
    let m = state.m.value();
    let m_shifted = match direction {
        Ladder::Raise => m + 1.0,
        Ladder::Lower => m - 1.0,
    };
    // j(j+1) - m(m+/-1) = (j -/+ m)(j +/- m + 1); the factored form is exact
    // at the ladder ends.
    let product = match direction {
        Ladder::Raise => (j - m) * (j + m + 1.0),
        Ladder::Lower => (j + m) * (j - m + 1.0),
    };
    debug_assert!((j * (j + 1.0) - m * m_shifted - product).abs() < 1e-12);
    product.sqrt()
}

/// Direct-sum decomposition of two collective spins of n_a and n_b spin-1/2
/// particles: total-spin blocks j = (n_a+n_b)/2 down to (n_a-n_b)/2.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Decomposition {
    n_a: u32,
    n_b: u32,
    j_list: Vec<Half>,
}

impl Decomposition {
    pub fn n_a(&self) -> u32 {
        self.n_a
    }

    pub fn n_b(&self) -> u32 {
        self.n_b
    }

    /// Collective spin of domain A, n_a / 2.
    pub fn j_a(&self) -> Half {
        Half::from_doubled(self.n_a as i32)
    }

    /// Collective spin of domain B, n_b / 2.
    pub fn j_b(&self) -> Half {
        Half::from_doubled(self.n_b as i32)
    }

    /// Block total spins in descending order; exactly n_b + 1 entries.
    pub fn j_list(&self) -> &[Half] {
        &self.j_list
    }

    /// Total dimension (n_a + 1)(n_b + 1) of the reduced space.
    pub fn dim(&self) -> usize {
        (self.n_a as usize + 1) * (self.n_b as usize + 1)
    }
}

/// Decompose the product of two collective spins into total-spin blocks.
///
/// Requires n_a >= n_b >= 1.
pub fn decompose(n_a: u32, n_b: u32) -> Result<Decomposition> {
    if n_b < 1 || n_a < n_b {
        return Err(Error::DomainSizes { n_a, n_b });
    }
    let j_max = (n_a + n_b) as i32;
    let j_min = (n_a - n_b) as i32;
    let j_list: Vec<Half> = (j_min..=j_max)
        .rev()
        .step_by(2)
        .map(Half::from_doubled)
        .collect();
    debug_assert_eq!(j_list.len(), n_b as usize + 1);
    Ok(Decomposition { n_a, n_b, j_list })
}

/// Clebsch-Gordan coefficient <j, m | j1, m1; j2, m2> in the Condon-Shortley
/// convention.
///
/// Returns 0 when m != m1 + m2 or when (j1, j2, j) violates the triangle
/// condition. Ill-formed (j, m) pairs are a domain error. Evaluated by the
/// closed Racah sum with log-factorial accumulation, which stays stable far
/// beyond the overflow point of direct factorials.
pub fn clebsch_gordan(j1: Half, j2: Half, m1: Half, m2: Half, j: Half, m: Half) -> Result<f64> {
    SpinQuantum::new(j1, m1)?;
    SpinQuantum::new(j2, m2)?;
    SpinQuantum::new(j, m)?;

    if m1 + m2 != m {
        return Ok(0.0);
    }
    if j > j1 + j2 || j < (j1 - j2).abs() {
        return Ok(0.0);
    }

    // All the combinations below are integers once the parity checks pass.
    let i = |h: Half| -> i64 {
        debug_assert!(h.is_integer());
        (h.doubled() / 2) as i64
    };

    let a = i(j1 + j2 - j);
    let b = i(j1 - j2 + j);
    let c = i(j2 - j1 + j);
    let d = i(j1 + j2 + j) + 1;

    let ln_delta = ln_factorial(a) + ln_factorial(b) + ln_factorial(c) - ln_factorial(d);
    let ln_weights = ln_factorial(i(j1 + m1))
        + ln_factorial(i(j1 - m1))
        + ln_factorial(i(j2 + m2))
        + ln_factorial(i(j2 - m2))
        + ln_factorial(i(j + m))
        + ln_factorial(i(j - m));
    let ln_prefactor = 0.5 * (((j.doubled() + 1) as f64).ln() + ln_delta + ln_weights);

    let k_min = 0.max(i(j2 - j - m1)).max(i(j1 - j + m2));
    let k_max = a.min(i(j1 - m1)).min(i(j2 + m2));
    if k_max < k_min {
        return Ok(0.0);
    }

    // Alternating sum; factor out the largest term before exponentiating.
    let ln_terms: Vec<f64> = (k_min..=k_max)
        .map(|k| {
            -(ln_factorial(k)
                + ln_factorial(a - k)
                + ln_factorial(i(j1 - m1) - k)
                + ln_factorial(i(j2 + m2) - k)
                + ln_factorial(i(j - j2 + m1) + k)
                + ln_factorial(i(j - j1 - m2) + k))
        })
        .collect();
    let ln_max = ln_terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = ln_terms
        .iter()
        .zip(k_min..)
        .map(|(ln_t, k)| {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            sign * (ln_t - ln_max).exp()
        })
        .sum();

    Ok(sum * (ln_prefactor + ln_max).exp())
}

const LN_FACTORIAL_TABLE_LEN: usize = 4096;

/// ln(n!) from a lazily built, compensated cumulative table.
fn ln_factorial(n: i64) -> f64 {
    debug_assert!(n >= 0, "ln_factorial of negative argument");
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        let mut t = Vec::with_capacity(LN_FACTORIAL_TABLE_LEN);
        t.push(0.0);
        let mut sum = 0.0_f64;
        let mut comp = 0.0_f64;
        for k in 1..LN_FACTORIAL_TABLE_LEN as u64 {
            // Kahan summation keeps the table accurate to a few ulps even at
            // the far end.
            let y = (k as f64).ln() - comp;
            let s = sum + y;
            comp = (s - sum) - y;
            sum = s;
            t.push(sum);
        }
        t
    });
    table
        .get(n as usize)
        .copied()
        .unwrap_or_else(|| panic!("ln_factorial argument {n} exceeds table size"))
}
