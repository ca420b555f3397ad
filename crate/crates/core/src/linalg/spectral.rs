use std::f64::consts::PI;

use faer::{Mat, Side};
use nalgebra::DVector;

use super::{ensure_hermitian, ensure_square, ComplexMatrix, ComplexVector, C64};
use crate::error::Result;

/// SVD with singular values sorted in descending order.
#[derive(Debug, Clone)]
pub struct SortedSvd {
    pub u: ComplexMatrix,
    pub singular_values: DVector<f64>,
    /// Rows are the conjugated right singular vectors, i.e. `V*`.
    pub v_t: ComplexMatrix,
}

fn to_faer(x: &ComplexMatrix) -> Mat<C64> {
    Mat::from_fn(x.nrows(), x.ncols(), |i, j| x[(i, j)])
}

fn singular_values(x: &ComplexMatrix) -> Vec<f64> {
    to_faer(x).singular_values().expect("singular values of a finite matrix")
}

pub fn sorted_svd(x: &ComplexMatrix) -> SortedSvd {
    let (rows, cols) = x.shape();
    let p = rows.min(cols);
    let svd = to_faer(x).thin_svd().expect("SVD of a finite matrix");
    let (u, s, v) = (svd.U(), svd.S().column_vector(), svd.V());
    let mut order: Vec<usize> = (0..p).collect();
    // stable: equal values keep basis order
    order.sort_by(|&a, &b| s[b].re.partial_cmp(&s[a].re).unwrap_or(std::cmp::Ordering::Equal));
    SortedSvd {
        u: ComplexMatrix::from_fn(rows, p, |i, c| u[(i, order[c])]),
        singular_values: DVector::from_iterator(p, order.iter().map(|&i| s[i].re)),
        v_t: ComplexMatrix::from_fn(p, cols, |r, j| v[(j, order[r])].conj()),
    }
}

/// Largest singular value with unit vectors `u`, `v` such that `u* x v = σ`.
pub fn top_singular_triple(x: &ComplexMatrix) -> (f64, ComplexVector, ComplexVector) {
    let svd = sorted_svd(x);
    let u = svd.u.column(0).into_owned();
    let v = svd.v_t.row(0).adjoint();
    (svd.singular_values[0], u, v)
}

pub fn operator_norm(x: &ComplexMatrix) -> f64 {
    if x.is_empty() {
        return 0.0;
    }
    singular_values(x).into_iter().fold(0.0, f64::max)
}

pub fn trace_norm(x: &ComplexMatrix) -> f64 {
    if x.is_empty() {
        return 0.0;
    }
    singular_values(x).into_iter().sum()
}

/// Eigenvalues in ascending order with matching eigenvector columns.
///
/// Only the lower triangle is read; callers pass Hermitian input.
pub fn hermitian_eigen(x: &ComplexMatrix) -> (DVector<f64>, ComplexMatrix) {
    let d = x.nrows();
    let eig = to_faer(x).self_adjoint_eigen(Side::Lower).expect("Hermitian eigendecomposition");
    let (vals, vecs) = (eig.S().column_vector(), eig.U());
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| vals[a].re.partial_cmp(&vals[b].re).unwrap_or(std::cmp::Ordering::Equal));
    (
        DVector::from_iterator(d, order.iter().map(|&i| vals[i].re)),
        ComplexMatrix::from_fn(d, d, |i, c| vecs[(i, order[c])]),
    )
}

pub fn min_eig_hermitian(x: &ComplexMatrix) -> Result<f64> {
    ensure_hermitian(x)?;
    let (vals, _) = hermitian_eigen(&super::hermitian_part(x));
    Ok(vals[0])
}

/// Unitary factor `U V*` of the polar decomposition of a square matrix.
pub fn polar_unitary(g: &ComplexMatrix) -> ComplexMatrix {
    let svd = sorted_svd(g);
    &svd.u * &svd.v_t
}

const RADIUS_GRID: usize = 64;
const RADIUS_REFINE: usize = 4;
const ANGLE_TOL: f64 = 1e-12;

/// `λ_max((e^{iθ} x + e^{-iθ} x*) / 2)` and its top eigenvector.
pub(crate) fn rotated_top(x: &ComplexMatrix, theta: f64) -> (f64, ComplexVector) {
    let phase = C64::from_polar(1.0, theta);
    let h = (x * phase + x.adjoint() * phase.conj()).scale(0.5);
    let (vals, vecs) = hermitian_eigen(&h);
    let last = vals.len() - 1;
    (vals[last], vecs.column(last).into_owned())
}

/// Numerical radius as `max_θ λ_max(Re(e^{iθ} x))`.
///
/// Evaluates a 64-point grid over `[0, 2π)` and golden-section refines the best
/// grid local maxima to `1e-12` in θ. Every evaluated θ gives a lower bound, so
/// the result is a lower bound that converges to the numerical radius.
pub fn numerical_radius(x: &ComplexMatrix) -> Result<f64> {
    numerical_radius_with_angle(x).map(|(w, _, _)| w)
}

/// Like [`numerical_radius`], also returning the maximizing angle and the
/// top eigenvector `a` of `Re(e^{iθ} x)` at that angle.
pub fn numerical_radius_with_angle(x: &ComplexMatrix) -> Result<(f64, f64, ComplexVector)> {
    ensure_square(x)?;
    let step = 2.0 * PI / RADIUS_GRID as f64;
    let grid: Vec<f64> = (0..RADIUS_GRID).map(|j| rotated_top(x, j as f64 * step).0).collect();

    let mut peaks: Vec<usize> = (0..RADIUS_GRID)
        .filter(|&j| {
            let prev = grid[(j + RADIUS_GRID - 1) % RADIUS_GRID];
            let next = grid[(j + 1) % RADIUS_GRID];
            grid[j] >= prev && grid[j] >= next
        })
        .collect();
    peaks.sort_by(|&a, &b| grid[b].partial_cmp(&grid[a]).unwrap_or(std::cmp::Ordering::Equal).then(a.cmp(&b)));
    peaks.truncate(RADIUS_REFINE);

    let mut best_theta = peaks.first().map_or(0.0, |&j| j as f64 * step);
    let mut best = grid[peaks.first().copied().unwrap_or(0)];
    for &j in &peaks {
        let center = j as f64 * step;
        let (theta, value) = golden_max(|t| rotated_top(x, t).0, center - step, center + step);
        if value > best {
            best = value;
            best_theta = theta;
        }
    }
    let (value, vec) = rotated_top(x, best_theta);
    Ok((value, best_theta.rem_euclid(2.0 * PI), vec))
}

fn golden_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> (f64, f64) {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > ANGLE_TOL {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = f(x1);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}
