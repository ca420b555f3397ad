//! Dense complex linear algebra on bipartite spaces.
//!
//! Every bipartite reshape uses the left-major flat index `i * n + j` for the
//! basis vector `|i>|j>` of `C^m ⊗ C^n`.

mod random;
pub(crate) mod schmidt;
pub(crate) mod spectral;

pub use random::{
    random_cptp, random_frame, random_gaussian_matrix, random_sr_k_vector, random_unit_vector, random_unitary,
};
pub use schmidt::{schmidt_decompose, schmidt_rank, truncate_schmidt, SchmidtDecomposition};
pub use spectral::{
    hermitian_eigen, min_eig_hermitian, numerical_radius, numerical_radius_with_angle, operator_norm, polar_unitary,
    sorted_svd, top_singular_triple, trace_norm, SortedSvd,
};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;
/// Dense complex matrix; the carrier for operators, Choi matrices and compressions.
pub type ComplexMatrix = DMatrix<C64>;
pub type ComplexVector = DVector<C64>;

pub const HERM_TOL: f64 = 1e-10;
pub const ORTHO_TOL: f64 = 1e-10;
pub const RECON_TOL: f64 = 1e-9;
pub const RANK_TOL: f64 = 1e-9;
pub const UNIT_TOL: f64 = 1e-9;

pub(crate) fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Subsystem dimensions `(m, n)` of `C^m ⊗ C^n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dims {
    pub m: usize,
    pub n: usize,
}

impl Dims {
    pub fn new(m: usize, n: usize) -> Self {
        Self { m, n }
    }

    pub fn total(&self) -> usize {
        self.m * self.n
    }

    pub fn min(&self) -> usize {
        self.m.min(self.n)
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.n + j
    }
}

/// Kronecker product `a ⊗ b` in the left-major convention.
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

pub fn tensor_vec(a: &ComplexVector, b: &ComplexVector) -> ComplexVector {
    a.kronecker(b)
}

/// Largest entrywise deviation `|x_ij - conj(x_ji)|`.
pub fn hermitian_deviation(x: &ComplexMatrix) -> f64 {
    if !x.is_square() {
        return f64::INFINITY;
    }
    let n = x.nrows();
    let mut dev: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            dev = dev.max((x[(i, j)] - x[(j, i)].conj()).norm());
        }
    }
    dev
}

pub fn is_hermitian(x: &ComplexMatrix, tol: f64) -> bool {
    hermitian_deviation(x) <= tol
}

pub fn ensure_square(x: &ComplexMatrix) -> Result<()> {
    if x.is_square() {
        Ok(())
    } else {
        Err(Error::NotSquare { rows: x.nrows(), cols: x.ncols() })
    }
}

pub fn ensure_hermitian(x: &ComplexMatrix) -> Result<()> {
    ensure_square(x)?;
    let deviation = hermitian_deviation(x);
    if deviation <= HERM_TOL {
        Ok(())
    } else {
        Err(Error::NotHermitian { deviation })
    }
}

/// `(x + x*) / 2`.
pub fn hermitian_part(x: &ComplexMatrix) -> ComplexMatrix {
    (x + x.adjoint()).scale(0.5)
}

/// Largest entrywise absolute difference.
pub fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Real part of `Tr(a b)`.
pub fn trace_product_re(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            acc += a[(i, j)] * b[(j, i)];
        }
    }
    acc.re
}

/// Operator on `C^m ⊗ C^n`, i.e. an element of `M_m ⊗ M_n ≅ M_m(M_n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteOperator {
    dims: Dims,
    mat: ComplexMatrix,
}

impl BipartiteOperator {
    pub fn new(mat: ComplexMatrix, m: usize, n: usize) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::DimensionMismatch("subsystem dimensions must be positive".into()));
        }
        if mat.nrows() != m * n || mat.ncols() != m * n {
            return Err(Error::DimensionMismatch(format!(
                "operator is {}x{} but m*n = {}",
                mat.nrows(),
                mat.ncols(),
                m * n
            )));
        }
        Ok(Self { dims: Dims::new(m, n), mat })
    }

    pub fn identity(m: usize, n: usize) -> Self {
        Self { dims: Dims::new(m, n), mat: ComplexMatrix::identity(m * n, m * n) }
    }

    /// Projector `|v><v|` onto a pure state.
    pub fn projector(v: &PureState) -> Self {
        let a = v.amplitudes();
        Self { dims: v.dims(), mat: a * a.adjoint() }
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn m(&self) -> usize {
        self.dims.m
    }

    pub fn n(&self) -> usize {
        self.dims.n
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }

    pub fn is_hermitian(&self) -> bool {
        is_hermitian(&self.mat, HERM_TOL)
    }

    pub fn adjoint(&self) -> Self {
        Self { dims: self.dims, mat: self.mat.adjoint() }
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { dims: self.dims, mat: &self.mat * s }
    }

    pub fn map_matrix(&self, f: impl FnOnce(&ComplexMatrix) -> ComplexMatrix) -> Result<Self> {
        Self::new(f(&self.mat), self.dims.m, self.dims.n)
    }

    /// Block `X_ij ∈ M_n` of the `m × m` block matrix.
    pub fn block(&self, i: usize, j: usize) -> ComplexMatrix {
        let n = self.dims.n;
        self.mat.view((i * n, j * n), (n, n)).into_owned()
    }

    pub fn trace(&self) -> C64 {
        self.mat.trace()
    }

    /// `<v|X|w>`.
    pub fn sandwich(&self, v: &ComplexVector, w: &ComplexVector) -> C64 {
        v.dotc(&(&self.mat * w))
    }

    /// `<v|X|v>` for a state on the same space.
    pub fn expectation(&self, v: &PureState) -> C64 {
        self.sandwich(v.amplitudes(), v.amplitudes())
    }

    /// Partial trace over the left factor.
    pub fn partial_trace_left(&self) -> ComplexMatrix {
        let Dims { m, n } = self.dims;
        let mut out = ComplexMatrix::zeros(n, n);
        for i in 0..m {
            out += self.mat.view((i * n, i * n), (n, n));
        }
        out
    }

    /// Partial trace over the right factor.
    pub fn partial_trace_right(&self) -> ComplexMatrix {
        let Dims { m, n } = self.dims;
        ComplexMatrix::from_fn(m, m, |i, j| (0..n).map(|p| self.mat[(i * n + p, j * n + p)]).sum())
    }

    /// Conjugation by a local unitary pair: `(u1 ⊗ u2) X (u1 ⊗ u2)*`.
    pub fn local_conjugate(&self, u1: &ComplexMatrix, u2: &ComplexMatrix) -> Result<Self> {
        let u = tensor(u1, u2);
        if u.nrows() != self.mat.nrows() {
            return Err(Error::DimensionMismatch("local unitary dimensions".into()));
        }
        Ok(Self { dims: self.dims, mat: &u * &self.mat * u.adjoint() })
    }
}

/// Unit vector in `C^m ⊗ C^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    dims: Dims,
    amps: ComplexVector,
}

impl PureState {
    /// Wraps amplitudes that are already normalized within `UNIT_TOL`.
    pub fn new(amps: ComplexVector, m: usize, n: usize) -> Result<Self> {
        if amps.len() != m * n {
            return Err(Error::DimensionMismatch(format!("vector has length {} but m*n = {}", amps.len(), m * n)));
        }
        let norm = amps.norm();
        if (norm - 1.0).abs() > UNIT_TOL {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self { dims: Dims::new(m, n), amps })
    }

    /// Normalizes arbitrary nonzero amplitudes.
    pub fn normalized(amps: ComplexVector, m: usize, n: usize) -> Result<Self> {
        if amps.len() != m * n {
            return Err(Error::DimensionMismatch(format!("vector has length {} but m*n = {}", amps.len(), m * n)));
        }
        let norm = amps.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::ZeroVector);
        }
        Ok(Self { dims: Dims::new(m, n), amps: amps.unscale(norm) })
    }

    pub fn basis(m: usize, n: usize, i: usize, j: usize) -> Self {
        let mut amps = ComplexVector::zeros(m * n);
        amps[i * n + j] = c(1.0, 0.0);
        Self { dims: Dims::new(m, n), amps }
    }

    pub fn product(a: &ComplexVector, b: &ComplexVector) -> Result<Self> {
        Self::normalized(tensor_vec(a, b), a.len(), b.len())
    }

    /// `(1/√n) Σ_i |i>|i>`.
    pub fn maximally_entangled(n: usize) -> Self {
        let mut amps = ComplexVector::zeros(n * n);
        let s = 1.0 / (n as f64).sqrt();
        for i in 0..n {
            amps[i * n + i] = c(s, 0.0);
        }
        Self { dims: Dims::new(n, n), amps }
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn amplitudes(&self) -> &ComplexVector {
        &self.amps
    }

    pub fn into_amplitudes(self) -> ComplexVector {
        self.amps
    }

    /// `m × n` coefficient matrix `M[i][j] = v[i*n + j]`.
    pub fn reshape(&self) -> ComplexMatrix {
        let Dims { m, n } = self.dims;
        ComplexMatrix::from_fn(m, n, |i, j| self.amps[i * n + j])
    }

    /// `|<self|other>|`.
    pub fn overlap(&self, other: &PureState) -> f64 {
        self.amps.dotc(&other.amps).norm()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::random::random_gaussian_matrix;
    use crate::rng::RandomConfig;

    #[test]
    fn tensor_identities() {
        let i2 = ComplexMatrix::identity(2, 2);
        let i3 = ComplexMatrix::identity(3, 3);
        assert_eq!(tensor(&i2, &i3), ComplexMatrix::identity(6, 6));
    }

    #[test]
    fn tensor_diagonals() {
        let a = ComplexMatrix::from_diagonal(&ComplexVector::from_vec(vec![c(1.0, 0.0), c(2.0, 0.0)]));
        let b = ComplexMatrix::from_element(1, 1, c(3.0, 0.0));
        let want = ComplexMatrix::from_diagonal(&ComplexVector::from_vec(vec![c(3.0, 0.0), c(6.0, 0.0)]));
        assert_eq!(tensor(&a, &b), want);
    }

    #[test]
    fn tensor_with_basis_projector_fills_top_left_block() {
        let mut rng = RandomConfig::new(5).rng();
        let sigma = random_gaussian_matrix(2, 2, &mut rng);
        let mut p0 = ComplexMatrix::zeros(2, 2);
        p0[(0, 0)] = c(1.0, 0.0);
        let t = tensor(&p0, &sigma);
        for r in 0..4 {
            for s in 0..4 {
                let want = if r < 2 && s < 2 { sigma[(r, s)] } else { c(0.0, 0.0) };
                assert_eq!(t[(r, s)], want, "entry ({r},{s})");
            }
        }
    }

    #[test]
    fn flat_index_is_left_major() {
        let a = ComplexVector::from_vec(vec![c(0.0, 0.0), c(1.0, 0.0)]);
        let b = ComplexVector::from_vec(vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        let v = tensor_vec(&a, &b);
        // |1>|2> sits at 1*3 + 2
        assert_eq!(v[5], c(1.0, 0.0));
        assert_eq!(Dims::new(2, 3).index(1, 2), 5);
    }

    #[test]
    fn bipartite_rejects_bad_dims() {
        assert!(BipartiteOperator::new(ComplexMatrix::identity(6, 6), 2, 2).is_err());
        assert!(BipartiteOperator::new(ComplexMatrix::zeros(6, 5), 2, 3).is_err());
    }

    #[test]
    fn partial_traces_of_product() {
        let mut rng = RandomConfig::new(9).rng();
        let a = random_gaussian_matrix(2, 2, &mut rng);
        let b = random_gaussian_matrix(3, 3, &mut rng);
        let x = BipartiteOperator::new(tensor(&a, &b), 2, 3).unwrap();
        assert!(max_abs_diff(&x.partial_trace_left(), &(&b * a.trace())) < 1e-12);
        assert!(max_abs_diff(&x.partial_trace_right(), &(&a * b.trace())) < 1e-12);
    }

    #[test]
    fn pure_state_normalization() {
        let v = ComplexVector::from_vec(vec![c(3.0, 0.0), c(0.0, 4.0), c(0.0, 0.0), c(0.0, 0.0)]);
        assert!(matches!(PureState::new(v.clone(), 2, 2), Err(Error::NotNormalized { .. })));
        let s = PureState::normalized(v, 2, 2).unwrap();
        assert!((s.amplitudes().norm() - 1.0).abs() < 1e-15);
        assert_eq!(PureState::normalized(ComplexVector::zeros(4), 2, 2), Err(Error::ZeroVector));
    }
}
