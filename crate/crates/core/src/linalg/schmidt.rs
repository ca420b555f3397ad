use super::{ComplexVector, Dims, PureState, C64};
use crate::error::{Error, Result};
use crate::linalg::spectral::sorted_svd;

/// `v = Σ_i coeffs[i] · left[i] ⊗ right[i]`, coefficients descending.
#[derive(Debug, Clone)]
pub struct SchmidtDecomposition {
    pub dims: Dims,
    pub coeffs: Vec<f64>,
    pub left: Vec<ComplexVector>,
    pub right: Vec<ComplexVector>,
}

impl SchmidtDecomposition {
    /// Reassembles `Σ_{i<terms} coeffs[i] left[i] ⊗ right[i]`.
    pub fn reconstruct(&self, terms: usize) -> ComplexVector {
        let mut v = ComplexVector::zeros(self.dims.total());
        for i in 0..terms.min(self.coeffs.len()) {
            v += self.left[i].kronecker(&self.right[i]) * C64::new(self.coeffs[i], 0.0);
        }
        v
    }

    pub fn rank(&self, rank_tol: f64) -> usize {
        self.coeffs.iter().filter(|&&s| s > rank_tol).count()
    }
}

/// SVD of the `m × n` reshaping of `v`.
pub fn schmidt_decompose(v: &PureState) -> Result<SchmidtDecomposition> {
    decompose_amplitudes(v.amplitudes(), v.dims())
}

pub(crate) fn decompose_amplitudes(amps: &ComplexVector, dims: Dims) -> Result<SchmidtDecomposition> {
    if amps.norm() == 0.0 {
        return Err(Error::ZeroVector);
    }
    let Dims { m, n } = dims;
    let mat = nalgebra::DMatrix::from_fn(m, n, |i, j| amps[i * n + j]);
    let svd = sorted_svd(&mat);
    let r = m.min(n);
    Ok(SchmidtDecomposition {
        dims,
        coeffs: svd.singular_values.iter().take(r).copied().collect(),
        left: (0..r).map(|i| svd.u.column(i).into_owned()).collect(),
        // M = Σ s_i u_i v_i*, so the right factor is the row of V* as a column
        right: (0..r).map(|i| svd.v_t.row(i).transpose()).collect(),
    })
}

pub fn schmidt_rank(v: &PureState, rank_tol: f64) -> usize {
    schmidt_decompose(v).map_or(0, |d| d.rank(rank_tol))
}

/// Best Schmidt-rank-`k` approximation direction of `v`, renormalized.
///
/// The result maximizes `|<w|v>|` over unit `w` with `SR(w) ≤ k`.
pub fn truncate_schmidt(v: &PureState, k: usize) -> Result<PureState> {
    let dims = v.dims();
    let w = truncate_amplitudes(v.amplitudes(), dims, k)?;
    PureState::new(w, dims.m, dims.n)
}

/// Truncation on raw (not necessarily normalized) amplitudes; returns a unit vector.
pub(crate) fn truncate_amplitudes(amps: &ComplexVector, dims: Dims, k: usize) -> Result<ComplexVector> {
    if k == 0 || k > dims.min() {
        return Err(Error::RankOutOfRange { k, max: dims.min() });
    }
    let d = decompose_amplitudes(amps, dims)?;
    let kept = d.reconstruct(k);
    let norm = kept.norm();
    if norm == 0.0 {
        return Err(Error::ZeroVector);
    }
    Ok(kept.unscale(norm))
}
