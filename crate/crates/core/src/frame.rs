//! Orthonormal frames in `C^n`, frame compressions of bipartite operators,
//! and projected-gradient ascent over frames.
//!
//! A vector `v = Σ_r a_r ⊗ b_r` with `SR(v) ≤ k` is determined by a frame
//! `{b_r}` on the right factor and a stacked coefficient vector
//! `a = (a_1; …; a_k) ∈ C^{mk}` (index `r·m + i`). Then `<v|X|w> = a* C c`
//! where `C` is the compression of `X` to the frame, so suprema over
//! Schmidt-rank-limited vectors split into an exact spectral step on `C` and
//! a search over frames.

use crate::error::{Error, Result};
use crate::linalg::{sorted_svd, BipartiteOperator, ComplexMatrix, ComplexVector, C64, ORTHO_TOL};

/// `k` orthonormal vectors in `C^n`, stored as the columns of an `n × k` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    vectors: ComplexMatrix,
}

impl Frame {
    pub fn new(vectors: ComplexMatrix) -> Result<Self> {
        let k = vectors.ncols();
        if k == 0 || k > vectors.nrows() {
            return Err(Error::DimensionMismatch(format!("frame of {k} vectors in C^{}", vectors.nrows())));
        }
        let gram = vectors.adjoint() * &vectors;
        let dev = crate::linalg::max_abs_diff(&gram, &ComplexMatrix::identity(k, k));
        if dev > ORTHO_TOL {
            return Err(Error::Precondition(format!("frame vectors not orthonormal (deviation {dev:.3e})")));
        }
        Ok(Self { vectors })
    }

    /// Modified Gram-Schmidt (two passes) on the columns of `g`.
    pub fn orthonormalize(g: &ComplexMatrix) -> Result<Self> {
        let (n, k) = g.shape();
        if k == 0 || k > n {
            return Err(Error::DimensionMismatch(format!("frame of {k} vectors in C^{n}")));
        }
        let mut q = g.clone();
        for j in 0..k {
            for _ in 0..2 {
                for i in 0..j {
                    let qi = q.column(i).into_owned();
                    let proj = qi.dotc(&q.column(j));
                    let mut col = q.column_mut(j);
                    col -= qi * proj;
                }
            }
            let norm = q.column(j).norm();
            if norm < 1e-12 {
                return Err(Error::ZeroVector);
            }
            let mut col = q.column_mut(j);
            col.unscale_mut(norm);
        }
        Ok(Self { vectors: q })
    }

    /// First `k` standard basis vectors of `C^n`.
    pub fn standard(n: usize, k: usize) -> Self {
        Self { vectors: ComplexMatrix::identity(n, k) }
    }

    pub fn k(&self) -> usize {
        self.vectors.ncols()
    }

    pub fn dim(&self) -> usize {
        self.vectors.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.vectors
    }

    pub fn vector(&self, r: usize) -> ComplexVector {
        self.vectors.column(r).into_owned()
    }

    pub(crate) fn from_raw(vectors: ComplexMatrix) -> Self {
        Self { vectors }
    }
}

/// `mn × mk` embedding `L` with `L a = Σ_r a_r ⊗ b_r`.
pub(crate) fn lift_matrix(m: usize, b: &ComplexMatrix) -> ComplexMatrix {
    let (n, k) = b.shape();
    let mut l = ComplexMatrix::zeros(m * n, m * k);
    for i in 0..m {
        for r in 0..k {
            for p in 0..n {
                l[(i * n + p, r * m + i)] = b[(p, r)];
            }
        }
    }
    l
}

/// Compression `L* X L`; its `(r, s)` block is `(<b_r|X_ij|b_s>)_{ij}`.
pub(crate) fn compress_raw(x: &BipartiteOperator, b: &ComplexMatrix) -> ComplexMatrix {
    let l = lift_matrix(x.m(), b);
    l.adjoint() * x.matrix() * &l
}

/// `G[p][r] = Σ_i conj(a[r·m + i]) y[i·n + p]`, the frame gradient of `Re<L a, y>`.
pub(crate) fn contract(a: &ComplexVector, y: &ComplexVector, m: usize, n: usize, k: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, k, |p, r| (0..m).map(|i| a[r * m + i].conj() * y[i * n + p]).sum())
}

/// Nearest frame to `g` (unitary polar factor of an `n × k` matrix).
pub(crate) fn polar_retract(g: &ComplexMatrix) -> ComplexMatrix {
    let svd = sorted_svd(g);
    let k = g.ncols();
    svd.u.columns(0, k) * &svd.v_t
}

/// Objective value with its Euclidean gradient in the frame (and optional angle).
pub(crate) struct Evaluation {
    pub value: f64,
    pub grad: ComplexMatrix,
    pub angle_grad: f64,
}

pub(crate) trait FrameObjective: Sync {
    fn evaluate(&self, frame: &ComplexMatrix, angle: f64) -> Evaluation;
    fn uses_angle(&self) -> bool {
        false
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct AscentSettings {
    pub max_iters: usize,
    pub obj_tol: f64,
}

#[derive(Debug, Clone)]
pub(crate) struct AscentResult {
    pub frame: ComplexMatrix,
    pub angle: f64,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
    pub history: Vec<f64>,
}

const MAX_HALVINGS: usize = 5;

fn real_inner(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x.conj() * y).re).sum()
}

/// Projected-gradient ascent on the frame manifold.
///
/// The Euclidean gradient is projected onto the tangent space
/// `G - B herm(B* G)`, the step is retracted by the polar factor, and a step
/// is accepted only if it strictly increases the objective (up to five
/// halvings per iteration). Step lengths follow a Barzilai-Borwein estimate.
/// The recorded history is therefore strictly increasing.
pub(crate) fn ascend<O: FrameObjective + ?Sized>(
    obj: &O,
    start: ComplexMatrix,
    start_angle: f64,
    settings: AscentSettings,
) -> AscentResult {
    let use_angle = obj.uses_angle();
    let mut frame = start;
    let mut angle = start_angle;
    let mut eval = obj.evaluate(&frame, angle);
    let mut history = vec![eval.value];
    let mut iterations = 0;
    let mut converged = false;
    let mut prev: Option<(ComplexMatrix, f64, ComplexMatrix, f64)> = None;
    let mut step: Option<f64> = None;
    let mut small_steps = 0;
    let mut failures = 0;

    while iterations < settings.max_iters {
        iterations += 1;
        let herm = {
            let bg = frame.adjoint() * &eval.grad;
            (&bg + bg.adjoint()).scale(0.5)
        };
        let tangent = &eval.grad - &frame * herm;
        let g_angle = if use_angle { eval.angle_grad } else { 0.0 };
        let gnorm = (tangent.norm_squared() + g_angle * g_angle).sqrt();
        if gnorm < 1e-13 {
            converged = true;
            break;
        }

        let mut t = match (&prev, step) {
            (Some((pf, pa, pg, pga)), Some(last)) => {
                let s = &frame - pf;
                let y = &tangent - pg;
                let sa = angle - pa;
                let ya = g_angle - pga;
                let ss = s.norm_squared() + sa * sa;
                let sy = real_inner(&s, &y) + sa * ya;
                if sy < -1e-300 {
                    ss / -sy
                } else {
                    last * 2.0
                }
            }
            (_, Some(last)) => last,
            _ => 0.3 / gnorm,
        };
        // at most ~1 radian of movement per step
        t = t.min(1.0 / gnorm).max(1e-14 / gnorm);

        let mut accepted = None;
        for _ in 0..=MAX_HALVINGS {
            let cand = polar_retract(&(&frame + &tangent * C64::new(t, 0.0)));
            let cand_angle = angle + t * g_angle;
            let cand_eval = obj.evaluate(&cand, cand_angle);
            if cand_eval.value > eval.value {
                accepted = Some((cand, cand_angle, cand_eval));
                break;
            }
            t *= 0.5;
        }

        match accepted {
            Some((cand, cand_angle, cand_eval)) => {
                failures = 0;
                let improvement = cand_eval.value - eval.value;
                prev = Some((frame, angle, tangent, g_angle));
                frame = cand;
                angle = cand_angle;
                eval = cand_eval;
                history.push(eval.value);
                step = Some(t);
                if improvement <= settings.obj_tol {
                    small_steps += 1;
                    if small_steps >= 2 {
                        converged = true;
                        break;
                    }
                } else {
                    small_steps = 0;
                }
            }
            None => {
                // no ascent at these step lengths; shrink and retry from scratch
                prev = None;
                step = Some(t);
                failures += 1;
                if t * gnorm < 1e-12 || failures >= 4 {
                    converged = true;
                    break;
                }
            }
        }
    }

    AscentResult { frame, angle, value: eval.value, iterations, converged, history }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{random_gaussian_matrix, random_unit_vector, tensor, Dims};
    use crate::rng::RandomConfig;

    fn random_op(m: usize, n: usize, seed: u64) -> BipartiteOperator {
        let mut rng = RandomConfig::new(seed).rng();
        BipartiteOperator::new(random_gaussian_matrix(m * n, m * n, &mut rng), m, n).unwrap()
    }

    #[test]
    fn compression_matches_block_formula() {
        let x = random_op(2, 3, 1);
        let mut rng = RandomConfig::new(2).rng();
        let f = crate::linalg::random_frame(3, 2, &mut rng);
        let cmp = compress_raw(&x, f.matrix());
        for r in 0..2 {
            for s in 0..2 {
                for i in 0..2 {
                    for j in 0..2 {
                        let want = f.vector(r).dotc(&(x.block(i, j) * f.vector(s)));
                        assert!((cmp[(r * 2 + i, s * 2 + j)] - want).norm() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn lift_reproduces_sandwich() {
        let x = random_op(3, 2, 3);
        let mut rng = RandomConfig::new(4).rng();
        let f = crate::linalg::random_frame(2, 2, &mut rng);
        let a = random_unit_vector(6, &mut rng);
        let c = random_unit_vector(6, &mut rng);
        let l = lift_matrix(3, f.matrix());
        let lhs = x.sandwich(&(&l * &a), &(&l * &c));
        let rhs = a.dotc(&(compress_raw(&x, f.matrix()) * &c));
        assert!((lhs - rhs).norm() < 1e-12);
        // orthonormal frame keeps the lifted vector unit
        assert!(((&l * &a).norm() - 1.0).abs() < 1e-12);
        let _ = Dims::new(3, 2);
    }

    #[test]
    fn contract_is_frame_gradient() {
        // d/dt Re<L(B + tD) a, y> = Re<D, contract(a, y)>
        let mut rng = RandomConfig::new(5).rng();
        let (m, n, k) = (2, 3, 2);
        let b = random_gaussian_matrix(n, k, &mut rng);
        let d = random_gaussian_matrix(n, k, &mut rng);
        let a = random_unit_vector(m * k, &mut rng);
        let y = random_unit_vector(m * n, &mut rng);
        let f = |t: f64| (lift_matrix(m, &(&b + &d * C64::new(t, 0.0))) * &a).dotc(&y).re;
        let h = 1e-6;
        let fd = (f(h) - f(-h)) / (2.0 * h);
        let g = contract(&a, &y, m, n, k);
        assert!((fd - real_inner(&d, &g)).abs() < 1e-8);
    }

    #[test]
    fn orthonormalize_rejects_dependent_columns() {
        let col = ComplexVector::from_vec(vec![C64::new(1.0, 0.0), C64::new(2.0, 0.0)]);
        let g = ComplexMatrix::from_columns(&[col.clone(), col]);
        assert!(Frame::orthonormalize(&g).is_err());
        assert!(Frame::new(ComplexMatrix::identity(2, 3)).is_err());
    }

    #[test]
    fn polar_retract_is_orthonormal() {
        let mut rng = RandomConfig::new(6).rng();
        let g = random_gaussian_matrix(4, 2, &mut rng);
        let b = polar_retract(&g);
        assert!(Frame::new(b).is_ok());
    }

    #[test]
    fn compress_identity_frame_of_product() {
        let mut rng = RandomConfig::new(7).rng();
        let a = random_gaussian_matrix(2, 2, &mut rng);
        let bb = random_gaussian_matrix(3, 3, &mut rng);
        let x = BipartiteOperator::new(tensor(&a, &bb), 2, 3).unwrap();
        let full = compress_raw(&x, &ComplexMatrix::identity(3, 3));
        // full frame only permutes the basis
        assert!((crate::linalg::operator_norm(&full) - crate::linalg::operator_norm(x.matrix())).abs() < 1e-12);
    }
}
