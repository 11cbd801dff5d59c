//! Basis bookkeeping for the reduced two-domain space, the density-matrix
//! container, representation conversion, and initial-state construction.
//!
//! Flat indexing of the direct-sum basis follows the block order of the
//! decomposition (largest j first); within a block the index ascends as m
//! descends from +j to -j. Indices are 0-based internally and 1-based in
//! labels and serialized output.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::angular::{clebsch_gordan, decompose, Decomposition};
use crate::error::{Error, Result};
use crate::half::Half;
use crate::linalg;

/// Complex dense matrix used throughout the crate.
pub type CMatrix = DMatrix<Complex64>;

/// Flat-index layout of the direct-sum space: block offsets plus the
/// decomposition that generated them.
#[derive(Clone, PartialEq, Debug)]
pub struct BlockLayout {
    decomposition: Decomposition,
    offsets: Vec<usize>,
}

/// One block of the direct-sum layout.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct Block {
    pub index: usize,
    pub j: Half,
    pub offset: usize,
    pub len: usize,
}

impl BlockLayout {
    pub fn new(decomposition: Decomposition) -> Self {
        let mut offsets = Vec::with_capacity(decomposition.j_list().len());
        let mut acc = 0;
        for j in decomposition.j_list() {
            offsets.push(acc);
            acc += j.multiplicity();
        }
        debug_assert_eq!(acc, decomposition.dim());
        BlockLayout {
            decomposition,
            offsets,
        }
    }

    /// Convenience constructor from domain sizes.
    pub fn for_domains(n_a: u32, n_b: u32) -> Result<Self> {
        Ok(Self::new(decompose(n_a, n_b)?))
    }

    pub fn decomposition(&self) -> &Decomposition {
        &self.decomposition
    }

    pub fn n_a(&self) -> u32 {
        self.decomposition.n_a()
    }

    pub fn n_b(&self) -> u32 {
        self.decomposition.n_b()
    }

    pub fn dim(&self) -> usize {
        self.decomposition.dim()
    }

    pub fn num_blocks(&self) -> usize {
        self.offsets.len()
    }

    pub fn blocks(&self) -> impl Iterator<Item = Block> + '_ {
        self.decomposition
            .j_list()
            .iter()
            .zip(&self.offsets)
            .enumerate()
            .map(|(index, (&j, &offset))| Block {
                index,
                j,
                offset,
                len: j.multiplicity(),
            })
    }

    pub fn block(&self, index: usize) -> Block {
        let j = self.decomposition.j_list()[index];
        Block {
            index,
            j,
            offset: self.offsets[index],
            len: j.multiplicity(),
        }
    }

    /// Flat 0-based index of |j_block; m>.
    pub fn flat_index(&self, block: usize, m: Half) -> usize {
        let j = self.decomposition.j_list()[block];
        debug_assert!(m.abs() <= j && m.same_parity(j));
        self.offsets[block] + ((j - m).doubled() / 2) as usize
    }

    /// (block index, j, m) of a flat 0-based index.
    pub fn coords(&self, flat: usize) -> (usize, Half, Half) {
        debug_assert!(flat < self.dim());
        let block = match self.offsets.binary_search(&flat) {
            Ok(b) => b,
            Err(b) => b - 1,
        };
        let j = self.decomposition.j_list()[block];
        let m = j - Half::from_int((flat - self.offsets[block]) as i32);
        (block, j, m)
    }

    /// Flat index of the dark state |j_block; -j_block> of a block.
    pub fn bottom_index(&self, block: usize) -> usize {
        let j = self.decomposition.j_list()[block];
        self.flat_index(block, -j)
    }

    /// Projection quantum number (n_a - n_b)/2 carried by the anti-parallel
    /// initial state; the one level populated in every block.
    pub fn initial_level(&self) -> Half {
        Half::from_doubled(self.n_a() as i32 - self.n_b() as i32)
    }

    fn direct_sum_labels(&self) -> Vec<String> {
        (0..self.dim())
            .map(|p| {
                let (_, j, m) = self.coords(p);
                format!("e_{}:|{};{}>>", p + 1, j, m)
            })
            .collect()
    }
}

/// Basis a density matrix is expressed in.
#[derive(Clone, PartialEq, Debug)]
pub enum Basis {
    DirectSum(BlockLayout),
    TensorProduct { n_a: u32, n_b: u32 },
}

impl Basis {
    pub fn dim(&self) -> usize {
        match self {
            Basis::DirectSum(layout) => layout.dim(),
            Basis::TensorProduct { n_a, n_b } => (*n_a as usize + 1) * (*n_b as usize + 1),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Basis::DirectSum(_) => "direct_sum",
            Basis::TensorProduct { .. } => "tensor_product",
        }
    }

    pub fn domain_sizes(&self) -> (u32, u32) {
        match self {
            Basis::DirectSum(layout) => (layout.n_a(), layout.n_b()),
            Basis::TensorProduct { n_a, n_b } => (*n_a, *n_b),
        }
    }

    fn labels(&self) -> Vec<String> {
        match self {
            Basis::DirectSum(layout) => layout.direct_sum_labels(),
            Basis::TensorProduct { n_a, n_b } => {
                let j_a = Half::from_doubled(*n_a as i32);
                let j_b = Half::from_doubled(*n_b as i32);
                let d_b = *n_b as usize + 1;
                (0..self.dim())
                    .map(|p| {
                        let m_a = j_a - Half::from_int((p / d_b) as i32);
                        let m_b = j_b - Half::from_int((p % d_b) as i32);
                        format!("mA={},mB={}", m_a, m_b)
                    })
                    .collect()
            }
        }
    }
}

/// Tensor-product flat index with A-major ordering and m descending:
/// `(j_a - m_a) * (n_b + 1) + (j_b - m_b)`.
pub fn tensor_index(n_a: u32, n_b: u32, m_a: Half, m_b: Half) -> usize {
    let j_a = Half::from_doubled(n_a as i32);
    let j_b = Half::from_doubled(n_b as i32);
    let row_a = ((j_a - m_a).doubled() / 2) as usize;
    let row_b = ((j_b - m_b).doubled() / 2) as usize;
    row_a * (n_b as usize + 1) + row_b
}

/// A density matrix tagged with the basis it is expressed in.
#[derive(Clone, PartialEq, Debug)]
pub struct DensityMatrix {
    data: CMatrix,
    basis: Basis,
}

impl DensityMatrix {
    /// Wrap a matrix; the dimension must match the basis.
    pub fn new(data: CMatrix, basis: Basis) -> Result<Self> {
        if data.nrows() != basis.dim() || data.ncols() != basis.dim() {
            return Err(Error::DimensionMismatch {
                context: "density matrix vs basis",
                expected: basis.dim(),
                found: data.nrows(),
            });
        }
        Ok(DensityMatrix { data, basis })
    }

    pub fn data(&self) -> &CMatrix {
        &self.data
    }

    pub fn into_data(self) -> CMatrix {
        self.data
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn trace(&self) -> Complex64 {
        self.data.trace()
    }

    /// The direct-sum layout, if this matrix lives in that basis.
    pub fn layout(&self) -> Option<&BlockLayout> {
        match &self.basis {
            Basis::DirectSum(layout) => Some(layout),
            Basis::TensorProduct { .. } => None,
        }
    }

    /// Check the density-matrix invariants: Hermitian to 1e-12, unit trace
    /// to 1e-10, minimum eigenvalue above -1e-9.
    pub fn validate(&self) -> Result<()> {
        let dev = linalg::hermiticity_deviation(&self.data);
        if dev > 1e-12 {
            return Err(Error::NotHermitian { deviation: dev });
        }
        let trace = self.trace();
        if (trace.re - 1.0).abs() > 1e-10 || trace.im.abs() > 1e-10 {
            return Err(Error::InvalidParams {
                reason: format!("trace {} not 1 within 1e-10", trace),
            });
        }
        let min = linalg::hermitian_eigenvalues(&self.data)
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        if min < -1e-9 {
            return Err(Error::InvalidState {
                min_eigenvalue: min,
            });
        }
        Ok(())
    }

    /// Serialize to the JSON wire format
    /// `{basis, n_a, n_b, labels, re, im}` with row-major matrices.
    pub fn to_json(&self) -> String {
        let (n_a, n_b) = self.basis.domain_sizes();
        let dim = self.dim();
        let row = |f: fn(&Complex64) -> f64| -> Vec<Vec<f64>> {
            (0..dim)
                .map(|i| (0..dim).map(|j| f(&self.data[(i, j)])).collect())
                .collect()
        };
        let json = DensityMatrixJson {
            basis: self.basis.name().to_string(),
            n_a,
            n_b,
            labels: self.basis.labels(),
            re: row(|z| z.re),
            im: row(|z| z.im),
        };
        serde_json::to_string_pretty(&json).expect("density matrix serialization")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let json: DensityMatrixJson =
            serde_json::from_str(text).map_err(|e| Error::InvalidParams {
                reason: format!("density matrix JSON: {e}"),
            })?;
        let basis = match json.basis.as_str() {
            "direct_sum" => Basis::DirectSum(BlockLayout::for_domains(json.n_a, json.n_b)?),
            "tensor_product" => Basis::TensorProduct {
                n_a: json.n_a,
                n_b: json.n_b,
            },
            other => {
                return Err(Error::InvalidParams {
                    reason: format!("unknown basis {other:?}"),
                })
            }
        };
        let dim = basis.dim();
        if json.re.len() != dim || json.im.len() != dim {
            return Err(Error::DimensionMismatch {
                context: "density matrix JSON rows",
                expected: dim,
                found: json.re.len(),
            });
        }
        let data = CMatrix::from_fn(dim, dim, |i, j| {
            Complex64::new(json.re[i][j], json.im[i][j])
        });
        DensityMatrix::new(data, basis)
    }
}

#[derive(Serialize, Deserialize)]
struct DensityMatrixJson {
    basis: String,
    n_a: u32,
    n_b: u32,
    labels: Vec<String>,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

/// Time-ordered density-matrix samples in dimensionless time.
#[derive(Clone, Debug)]
pub struct Trajectory {
    times: Vec<f64>,
    states: Vec<DensityMatrix>,
}

impl Trajectory {
    pub fn new(times: Vec<f64>, states: Vec<DensityMatrix>) -> Self {
        debug_assert_eq!(times.len(), states.len());
        debug_assert!(times.windows(2).all(|w| w[0] < w[1]));
        Trajectory { times, states }
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn states(&self) -> &[DensityMatrix] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> &DensityMatrix {
        self.states.last().expect("non-empty trajectory")
    }

    /// Time series of one element, 0-based indices.
    pub fn element(&self, i: usize, j: usize) -> impl Iterator<Item = (f64, Complex64)> + '_ {
        self.times
            .iter()
            .zip(&self.states)
            .map(move |(&t, rho)| (t, rho.data()[(i, j)]))
    }
}

/// Domain selector for single-domain observables.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Domain {
    A,
    B,
}

/// Coefficients of the anti-parallel product state |n_a/2>_A (x) |-n_b/2>_B
/// over the direct-sum basis: one Clebsch-Gordan coefficient per block, all
/// at the m = (n_a - n_b)/2 level.
pub fn initial_block_amplitudes(layout: &BlockLayout) -> Vec<f64> {
    let dec = layout.decomposition();
    let (j_a, j_b) = (dec.j_a(), dec.j_b());
    let m0 = layout.initial_level();
    dec.j_list()
        .iter()
        .map(|&j| {
            clebsch_gordan(j_a, j_b, j_a, -j_b, j, m0)
                .expect("valid quantum numbers by construction")
        })
        .collect()
}

/// Density matrix of the anti-parallel configuration (domain A fully up,
/// domain B fully down) in the direct-sum basis: a rank-1 projector with
/// support only on the m = (n_a - n_b)/2 level of each block.
pub fn initial_state(layout: &BlockLayout) -> DensityMatrix {
    let dim = layout.dim();
    let amplitudes = initial_block_amplitudes(layout);
    let m0 = layout.initial_level();
    let mut data = CMatrix::zeros(dim, dim);
    for (bi, &ci) in amplitudes.iter().enumerate() {
        let p = layout.flat_index(bi, m0);
        for (bj, &cj) in amplitudes.iter().enumerate() {
            let q = layout.flat_index(bj, m0);
            data[(p, q)] = Complex64::new(ci * cj, 0.0);
        }
    }
    DensityMatrix {
        data,
        basis: Basis::DirectSum(layout.clone()),
    }
}

/// Orthogonal change-of-basis matrix U with U[tp, ds] the Clebsch-Gordan
/// coefficient <m_a, m_b | j; m>; maps direct-sum coordinates to
/// tensor-product coordinates.
pub fn basis_change_matrix(layout: &BlockLayout) -> DMatrix<f64> {
    let dec = layout.decomposition();
    let (n_a, n_b) = (dec.n_a(), dec.n_b());
    let (j_a, j_b) = (dec.j_a(), dec.j_b());
    let dim = layout.dim();
    let mut u = DMatrix::zeros(dim, dim);
    for block in layout.blocks() {
        let mut m = block.j;
        while m >= -block.j {
            let ds = layout.flat_index(block.index, m);
            // Sum over m_a with m_b = m - m_a fixed.
            let mut m_a = j_a;
            while m_a >= -j_a {
                let m_b = m - m_a;
                if m_b.abs() <= j_b {
                    let c = clebsch_gordan(j_a, j_b, m_a, m_b, block.j, m)
                        .expect("valid quantum numbers by construction");
                    if c != 0.0 {
                        u[(tensor_index(n_a, n_b, m_a, m_b), ds)] = c;
                    }
                }
                m_a = m_a - Half::from_int(1);
            }
            m = m - Half::from_int(1);
        }
    }
    u
}

fn apply_orthogonal(u: &DMatrix<f64>, rho: &CMatrix, transpose_first: bool) -> CMatrix {
    let uc = u.map(|x| Complex64::new(x, 0.0));
    if transpose_first {
        uc.transpose() * rho * &uc
    } else {
        &uc * rho * uc.transpose()
    }
}

/// Re-express a direct-sum density matrix in the tensor-product basis.
///
/// Trace and spectrum are preserved (the map is a rotation by the
/// Clebsch-Gordan matrix).
pub fn to_tensor_product(rho: &DensityMatrix) -> Result<DensityMatrix> {
    let layout = rho.layout().ok_or(Error::WrongBasis {
        expected: "direct_sum",
        found: "tensor_product",
    })?;
    let u = basis_change_matrix(layout);
    Ok(DensityMatrix {
        data: apply_orthogonal(&u, &rho.data, false),
        basis: Basis::TensorProduct {
            n_a: layout.n_a(),
            n_b: layout.n_b(),
        },
    })
}

/// Re-express a tensor-product density matrix in the direct-sum basis.
pub fn from_tensor_product(rho: &DensityMatrix) -> Result<DensityMatrix> {
    let (n_a, n_b) = match rho.basis() {
        Basis::TensorProduct { n_a, n_b } => (*n_a, *n_b),
        Basis::DirectSum(_) => {
            return Err(Error::WrongBasis {
                expected: "tensor_product",
                found: "direct_sum",
            })
        }
    };
    let layout = BlockLayout::for_domains(n_a, n_b)?;
    let u = basis_change_matrix(&layout);
    Ok(DensityMatrix {
        data: apply_orthogonal(&u, &rho.data, true),
        basis: Basis::DirectSum(layout),
    })
}

/// Tensor-product density matrix of the anti-parallel configuration.
pub fn initial_state_tensor_product(n_a: u32, n_b: u32) -> Result<DensityMatrix> {
    let dim = (n_a as usize + 1) * (n_b as usize + 1);
    let j_a = Half::from_doubled(n_a as i32);
    let j_b = Half::from_doubled(n_b as i32);
    if n_b < 1 || n_a < n_b {
        return Err(Error::DomainSizes { n_a, n_b });
    }
    let p = tensor_index(n_a, n_b, j_a, -j_b);
    let mut data = CMatrix::zeros(dim, dim);
    data[(p, p)] = Complex64::new(1.0, 0.0);
    Ok(DensityMatrix {
        data,
        basis: Basis::TensorProduct { n_a, n_b },
    })
}

/// Expectation value of J^z restricted to one domain; tensor-product basis
/// only (J^z_A (x) I or I (x) J^z_B is diagonal there).
pub fn observable_jz(rho: &DensityMatrix, domain: Domain) -> Result<f64> {
    let (n_a, n_b) = match rho.basis() {
        Basis::TensorProduct { n_a, n_b } => (*n_a, *n_b),
        Basis::DirectSum(_) => {
            return Err(Error::WrongBasis {
                expected: "tensor_product",
                found: "direct_sum",
            })
        }
    };
    let j_a = Half::from_doubled(n_a as i32);
    let j_b = Half::from_doubled(n_b as i32);
    let d_b = n_b as usize + 1;
    let mut total = 0.0;
    for p in 0..rho.dim() {
        let m = match domain {
            Domain::A => j_a - Half::from_int((p / d_b) as i32),
            Domain::B => j_b - Half::from_int((p % d_b) as i32),
        };
        total += m.value() * rho.data[(p, p)].re;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn layout(n_a: u32, n_b: u32) -> BlockLayout {
        BlockLayout::for_domains(n_a, n_b).unwrap()
    }

    #[test]
    fn flat_indexing_follows_block_order() {
        let l = layout(3, 2);
        // Blocks j = 5/2, 3/2, 1/2 with dims 6, 4, 2.
        assert_eq!(l.dim(), 12);
        assert_eq!(l.block(0).offset, 0);
        assert_eq!(l.block(1).offset, 6);
        assert_eq!(l.block(2).offset, 10);
        // Index ascends as m descends.
        assert_eq!(l.flat_index(0, Half::from_doubled(5)), 0);
        assert_eq!(l.flat_index(0, Half::from_doubled(-5)), 5);
        assert_eq!(l.flat_index(1, Half::from_doubled(1)), 7);
        assert_eq!(l.bottom_index(2), 11);
        let (b, j, m) = l.coords(7);
        assert_eq!((b, j.doubled(), m.doubled()), (1, 3, 1));
    }

    #[test]
    fn initial_state_two_blocks() {
        // n_a = 2, n_b = 1: weights 1/(N+1) and N/(N+1) with the positive
        // cross term sqrt(N)/(N+1), at 1-based entries (2,2), (5,5), (2,5).
        let rho = initial_state(&layout(2, 1));
        let d = rho.data();
        assert_abs_diff_eq!(d[(1, 1)].re, 1.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(d[(4, 4)].re, 2.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(d[(1, 4)].re, 2.0_f64.sqrt() / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(d[(4, 1)].re, 2.0_f64.sqrt() / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(rho.trace().re, 1.0, epsilon = 1e-15);
        rho.validate().unwrap();
    }

    #[test]
    fn initial_state_single_spin_each() {
        // n_a = n_b = 1: blocks j = 1 (indices 1..3) and j = 0 (index 4);
        // populated level m = 0 sits at 1-based entries (2,2) and (4,4).
        let rho = initial_state(&layout(1, 1));
        let d = rho.data();
        assert_abs_diff_eq!(d[(1, 1)].re, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(d[(3, 3)].re, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(d[(1, 3)].re, 0.5, epsilon = 1e-15);
        assert_eq!(d[(2, 2)], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn initial_state_three_blocks() {
        // n_a = 3, n_b = 2: weights 2/((N+1)(N+2)), 2/(N+2), (N-1)/(N+1)
        // at 1-based entries (3,3), (8,8), (11,11), with the printed cross
        // terms.
        let rho = initial_state(&layout(3, 2));
        let d = rho.data();
        assert_abs_diff_eq!(d[(2, 2)].re, 0.1, epsilon = 1e-15);
        assert_abs_diff_eq!(d[(7, 7)].re, 0.4, epsilon = 1e-15);
        assert_abs_diff_eq!(d[(10, 10)].re, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(d[(2, 7)].re, 0.2, epsilon = 1e-15);
        assert_abs_diff_eq!(d[(2, 10)].re, 0.25 * (0.8_f64).sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(d[(7, 10)].re, 0.2_f64.sqrt(), epsilon = 1e-15);
        rho.validate().unwrap();
    }

    #[test]
    fn initial_state_support_structure() {
        // Exactly n_b + 1 nonzero diagonal entries, one per block at
        // m = (n_a - n_b)/2, summing to 1.
        for (n_a, n_b) in [(1, 1), (4, 1), (5, 2), (6, 3), (9, 4)] {
            let l = layout(n_a, n_b);
            let rho = initial_state(&l);
            let m0 = l.initial_level();
            let mut sum = 0.0;
            let mut nonzero = 0;
            for p in 0..l.dim() {
                let v = rho.data()[(p, p)].re;
                let (_, _, m) = l.coords(p);
                if v != 0.0 {
                    nonzero += 1;
                    assert_eq!(m, m0);
                    sum += v;
                }
            }
            assert_eq!(nonzero, n_b as usize + 1);
            assert_abs_diff_eq!(sum, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn initial_weights_closed_forms() {
        // n_b = 1: 1/(N+1), N/(N+1); n_b = 2: 2/((N+1)(N+2)), 2/(N+2),
        // (N-1)/(N+1).
        for n_a in 1..=12u32 {
            let n = n_a as f64;
            let amps = initial_block_amplitudes(&layout(n_a, 1));
            assert_abs_diff_eq!(amps[0] * amps[0], 1.0 / (n + 1.0), epsilon = 1e-13);
            assert_abs_diff_eq!(amps[1] * amps[1], n / (n + 1.0), epsilon = 1e-13);
        }
        for n_a in 2..=12u32 {
            let n = n_a as f64;
            let amps = initial_block_amplitudes(&layout(n_a, 2));
            assert_abs_diff_eq!(
                amps[0] * amps[0],
                2.0 / ((n + 1.0) * (n + 2.0)),
                epsilon = 1e-13
            );
            assert_abs_diff_eq!(amps[1] * amps[1], 2.0 / (n + 2.0), epsilon = 1e-13);
            assert_abs_diff_eq!(amps[2] * amps[2], (n - 1.0) / (n + 1.0), epsilon = 1e-13);
        }
    }

    #[test]
    fn basis_change_is_orthogonal() {
        for (n_a, n_b) in [(1, 1), (4, 1), (5, 2), (6, 3)] {
            let u = basis_change_matrix(&layout(n_a, n_b));
            let gram = u.transpose() * &u;
            let dim = gram.nrows();
            for i in 0..dim {
                for j in 0..dim {
                    let expect = if i == j { 1.0 } else { 0.0 };
                    assert!(
                        (gram[(i, j)] - expect).abs() < 1e-12,
                        "U^T U deviates at ({i},{j}) for ({n_a},{n_b})"
                    );
                }
            }
        }
    }

    #[test]
    fn anti_parallel_product_state_converts_to_initial_state() {
        for (n_a, n_b) in [(2, 1), (3, 2), (5, 3)] {
            let tp = initial_state_tensor_product(n_a, n_b).unwrap();
            let ds = from_tensor_product(&tp).unwrap();
            let expect = initial_state(&layout(n_a, n_b));
            let diff = (ds.data() - expect.data()).map(|z| z.norm()).max();
            assert!(diff < 1e-12, "({n_a},{n_b}) deviation {diff}");
        }
    }

    #[test]
    fn round_trip_preserves_matrix() {
        let l = layout(4, 2);
        let rho = initial_state(&l);
        let back = from_tensor_product(&to_tensor_product(&rho).unwrap()).unwrap();
        let diff = (back.data() - rho.data()).map(|z| z.norm()).max();
        assert!(diff < 1e-12);
    }

    #[test]
    fn maximally_mixed_is_basis_independent() {
        let l = layout(3, 1);
        let dim = l.dim();
        let eye = CMatrix::identity(dim, dim) * Complex64::new(1.0 / dim as f64, 0.0);
        let rho = DensityMatrix::new(eye.clone(), Basis::DirectSum(l)).unwrap();
        let tp = to_tensor_product(&rho).unwrap();
        let diff = (tp.data() - &eye).map(|z| z.norm()).max();
        assert!(diff < 1e-14);
    }

    #[test]
    fn zero_matrix_converts_to_zero() {
        let basis = Basis::TensorProduct { n_a: 3, n_b: 1 };
        let zero = DensityMatrix::new(CMatrix::zeros(8, 8), basis).unwrap();
        let ds = from_tensor_product(&zero).unwrap();
        assert!(ds.data().iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn steady_state_tensor_components() {
        // Diagonal steady state with weights 1/(N+1), N/(N+1) at the block
        // bottoms maps to a tensor-product matrix whose
        // (m_a = -N/2, m_b = +1/2) diagonal weight is N^2/(N+1)^2 and whose
        // cross term is -N^(3/2)/(N+1)^2.
        for n_a in 1..=8u32 {
            let n = n_a as f64;
            let l = layout(n_a, 1);
            let mut data = CMatrix::zeros(l.dim(), l.dim());
            data[(l.bottom_index(0), l.bottom_index(0))] = Complex64::new(1.0 / (n + 1.0), 0.0);
            data[(l.bottom_index(1), l.bottom_index(1))] = Complex64::new(n / (n + 1.0), 0.0);
            let rho = DensityMatrix::new(data, Basis::DirectSum(l)).unwrap();
            let tp = to_tensor_product(&rho).unwrap();

            let j_a = Half::from_doubled(n_a as i32);
            let up_b = Half::from_doubled(1);
            let dn_b = Half::from_doubled(-1);
            let p_excited = tensor_index(n_a, 1, -j_a, up_b);
            assert_abs_diff_eq!(
                tp.data()[(p_excited, p_excited)].re,
                n * n / ((n + 1.0) * (n + 1.0)),
                epsilon = 1e-13
            );
            if n_a >= 2 {
                let m_a2 = -j_a + Half::from_int(1);
                let p2 = tensor_index(n_a, 1, m_a2, dn_b);
                assert_abs_diff_eq!(
                    tp.data()[(p2, p2)].re,
                    n / ((n + 1.0) * (n + 1.0)),
                    epsilon = 1e-13
                );
                assert_abs_diff_eq!(
                    tp.data()[(p2, p_excited)].re,
                    -n.powf(1.5) / ((n + 1.0) * (n + 1.0)),
                    epsilon = 1e-13
                );
            }
        }
    }

    #[test]
    fn jz_expectations() {
        let tp = initial_state_tensor_product(4, 1).unwrap();
        assert_abs_diff_eq!(observable_jz(&tp, Domain::A).unwrap(), 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(
            observable_jz(&tp, Domain::B).unwrap(),
            -0.5,
            epsilon = 1e-15
        );

        let dim = 8;
        let eye = CMatrix::identity(dim, dim) * Complex64::new(1.0 / dim as f64, 0.0);
        let mixed = DensityMatrix::new(eye, Basis::TensorProduct { n_a: 3, n_b: 1 }).unwrap();
        assert_abs_diff_eq!(
            observable_jz(&mixed, Domain::A).unwrap(),
            0.0,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            observable_jz(&mixed, Domain::B).unwrap(),
            0.0,
            epsilon = 1e-15
        );

        let ds = initial_state(&layout(3, 1));
        assert!(matches!(
            observable_jz(&ds, Domain::A),
            Err(Error::WrongBasis { .. })
        ));
    }

    #[test]
    fn jz_b_matches_element_expansion() {
        // For n_a = 2, n_b = 1 the B polarization expands over direct-sum
        // elements as
        //   (1/6) [ -4 sqrt(2) Re(rho_2_5 + rho_3_6)
        //           + 3 rho_1_1 + rho_2_2 - rho_3_3
        //           - 3 rho_4_4 - rho_5_5 + rho_6_6 ],
        // with the cross-term sign fixed by the Condon-Shortley phases.
        let l = layout(2, 1);
        let mut g = CMatrix::zeros(6, 6);
        let mut seed = 0.3_f64;
        for v in g.iter_mut() {
            seed = (seed * 97.0 + 0.123).fract();
            *v = Complex64::new(seed - 0.5, seed * 0.7 - 0.3);
        }
        let rho_data = &g * g.adjoint();
        let rho_data = &rho_data / Complex64::new(rho_data.trace().re, 0.0);
        let rho = DensityMatrix::new(rho_data.clone(), Basis::DirectSum(l)).unwrap();

        let via_conversion = observable_jz(&to_tensor_product(&rho).unwrap(), Domain::B).unwrap();
        let d = |i: usize, j: usize| rho_data[(i - 1, j - 1)].re;
        let expansion = (-4.0 * 2.0_f64.sqrt() * (d(2, 5) + d(3, 6)) + 3.0 * d(1, 1) + d(2, 2)
            - d(3, 3)
            - 3.0 * d(4, 4)
            - d(5, 5)
            + d(6, 6))
            / 6.0;
        assert_abs_diff_eq!(via_conversion, expansion, epsilon = 1e-13);
    }

    #[test]
    fn json_round_trip() {
        let rho = initial_state(&layout(3, 2));
        let text = rho.to_json();
        let back = DensityMatrix::from_json(&text).unwrap();
        assert_eq!(back.basis().name(), "direct_sum");
        let diff = (back.data() - rho.data()).map(|z| z.norm()).max();
        assert!(diff < 1e-15);
        assert!(text.contains("\"e_3:|5/2;1/2>>\""));
    }
}
