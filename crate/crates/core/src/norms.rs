//! Schmidt-rank-constrained operator norms on `M_m ⊗ M_n`.
//!
//! | quantity | feasible set | routine |
//! |---|---|---|
//! | `‖X‖_{S(k)}` (k-minimal space norm) | `SR(v), SR(w) ≤ k` | [`sk_norm`] |
//! | k-super-minimal matrix-order norm | as above, `v`, `w` share right Schmidt vectors | [`omin_norm`] |
//! | minimal order norm `‖X‖_m` | `|<v|X|v>|`, `SR(v) ≤ k` | [`min_order_norm`] |
//!
//! All three suprema are nonconvex. The routines return lower bounds from
//! multi-restart ascent whose inner steps are exact; see [`NormEstimate`].

use serde::{Deserialize, Serialize};

use crate::cones::{self, BlockStatus};
use crate::error::{Error, Result};
use crate::frame::{self, ascend, AscentSettings, Evaluation, Frame, FrameObjective};
use crate::linalg::{
    self, hermitian_eigen, hermitian_part, max_abs_diff, numerical_radius_with_angle, operator_norm, random_frame,
    random_sr_k_vector, top_singular_triple, BipartiteOperator, ComplexMatrix, ComplexVector, Dims, PureState, C64,
    RECON_TOL,
};
use crate::maps::MapRepr;
use crate::parallel::{argmax_first, map_indexed};
use crate::rng::RandomConfig;

/// Re-evaluation tolerance for witnesses.
pub const EVAL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Lower,
    Upper,
    Exact,
}

/// Vectors attaining a reported lower bound.
#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    /// `value = |<left|X|right>|`
    Pair { left: PureState, right: PureState },
    /// `value = |<v|X|v>|`
    Vector(PureState),
}

impl Witness {
    pub fn evaluate(&self, x: &BipartiteOperator) -> f64 {
        match self {
            Witness::Pair { left, right } => x.sandwich(left.amplitudes(), right.amplitudes()).norm(),
            Witness::Vector(v) => x.expectation(v).norm(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct NormEstimate {
    pub value: f64,
    pub direction: Direction,
    pub witness: Option<Witness>,
    pub restarts_used: usize,
    pub iterations: usize,
    pub converged: bool,
    /// Objective sequence per restart, in restart order.
    pub history: Vec<Vec<f64>>,
}

impl NormEstimate {
    fn exact(value: f64, witness: Option<Witness>) -> Self {
        Self {
            value,
            direction: Direction::Exact,
            witness,
            restarts_used: 0,
            iterations: 0,
            converged: true,
            history: Vec::new(),
        }
    }
}

/// Restart/iteration budget shared by every multi-start optimizer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeeSawConfig {
    pub restarts: usize,
    pub max_iters: usize,
    pub obj_tol: f64,
    pub rng: RandomConfig,
}

impl Default for SeeSawConfig {
    fn default() -> Self {
        Self { restarts: 20, max_iters: 200, obj_tol: 1e-9, rng: RandomConfig::default() }
    }
}

impl SeeSawConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self { rng: RandomConfig::new(seed), ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(Error::InvalidConfig("restarts must be at least 1".into()));
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidConfig("max_iters must be at least 1".into()));
        }
        if self.obj_tol.is_nan() || self.obj_tol <= 0.0 {
            return Err(Error::InvalidConfig("obj_tol must be positive".into()));
        }
        Ok(())
    }

    /// Same budget on an independent random stream.
    pub fn fork(&self, index: u64) -> Self {
        Self { rng: self.rng.fork(index), ..*self }
    }

    pub(crate) fn ascent(&self) -> AscentSettings {
        AscentSettings { max_iters: self.max_iters, obj_tol: self.obj_tol }
    }
}

pub(crate) fn check_rank(k: usize, max: usize) -> Result<()> {
    if k == 0 || k > max {
        Err(Error::RankOutOfRange { k, max })
    } else {
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// S(k) norm

struct SeeSawRun {
    value: f64,
    left: ComplexVector,
    right: ComplexVector,
    iterations: usize,
    converged: bool,
    history: Vec<f64>,
}

fn sk_restart(x: &BipartiteOperator, k: usize, cfg: &SeeSawConfig, index: usize) -> Result<SeeSawRun> {
    let dims = x.dims();
    let mut rng = cfg.rng.fork(index as u64).rng();
    let mut v = random_sr_k_vector(dims, k, &mut rng).into_amplitudes();
    let mut w = random_sr_k_vector(dims, k, &mut rng).into_amplitudes();
    let xm = x.matrix();
    let xa = xm.adjoint();
    let mut value = v.dotc(&(xm * &w)).norm();
    let mut history = vec![value];
    let mut iterations = 0;
    let mut converged = false;

    while iterations < cfg.max_iters {
        iterations += 1;
        let start = value;

        // v ← best SR-k direction of X w
        let xw = xm * &w;
        if xw.norm() > 0.0 {
            let cand = linalg::schmidt::truncate_amplitudes(&xw, dims, k)?;
            let val = cand.dotc(&xw).norm();
            if val >= value {
                v = cand;
                value = val;
            }
        }
        history.push(value);

        // w ← best SR-k direction of X* v
        let xv = &xa * &v;
        if xv.norm() > 0.0 {
            let cand = linalg::schmidt::truncate_amplitudes(&xv, dims, k)?;
            let val = xv.dotc(&cand).norm();
            if val >= value {
                w = cand;
                value = val;
            }
        }
        history.push(value);

        if value - start <= cfg.obj_tol {
            converged = true;
            break;
        }
    }
    Ok(SeeSawRun { value, left: v, right: w, iterations, converged, history })
}

/// Lower bound on `‖X‖_{S(k)} = sup |<v|X|w>|` over unit `v`, `w` with `SR ≤ k`.
///
/// Alternates `v ← trunc_k(X w)` and `w ← trunc_k(X* v)`; each half-step is an
/// exact maximization, so every restart's objective sequence is nondecreasing.
/// For `k = min(m, n)` the constraint is vacuous and the operator norm is
/// returned with direction `Exact`.
pub fn sk_norm(x: &BipartiteOperator, k: usize, cfg: &SeeSawConfig) -> Result<NormEstimate> {
    cfg.validate()?;
    let dims = x.dims();
    check_rank(k, dims.min())?;
    if k == dims.min() {
        let (s, u, v) = top_singular_triple(x.matrix());
        let witness = Witness::Pair {
            left: PureState::normalized(u, dims.m, dims.n)?,
            right: PureState::normalized(v, dims.m, dims.n)?,
        };
        return Ok(NormEstimate::exact(s, Some(witness)));
    }

    let runs = map_indexed(cfg.restarts, |i| sk_restart(x, k, cfg, i));
    let runs = runs.into_iter().collect::<Result<Vec<_>>>()?;
    let best = argmax_first(&runs, |r| r.value).expect("at least one restart");
    let b = &runs[best];
    Ok(NormEstimate {
        value: b.value,
        direction: Direction::Lower,
        witness: Some(Witness::Pair {
            left: PureState::normalized(b.left.clone(), dims.m, dims.n)?,
            right: PureState::normalized(b.right.clone(), dims.m, dims.n)?,
        }),
        restarts_used: runs.len(),
        iterations: runs.iter().map(|r| r.iterations).sum(),
        converged: b.converged,
        history: runs.into_iter().map(|r| r.history).collect(),
    })
}

// ---------------------------------------------------------------------------
// frame compressions

/// The `mk × mk` compression whose `(r, s)` block is `(<b_r|X_ij|b_s>)_{ij}`.
pub fn compress(x: &BipartiteOperator, frame: &Frame) -> Result<ComplexMatrix> {
    if frame.dim() != x.n() {
        return Err(Error::DimensionMismatch(format!(
            "frame vectors live in C^{} but the right factor is C^{}",
            frame.dim(),
            x.n()
        )));
    }
    Ok(frame::compress_raw(x, frame.matrix()))
}

/// Top singular value of the compression.
struct SingularObjective<'a> {
    x: &'a BipartiteOperator,
    xa: ComplexMatrix,
}

impl FrameObjective for SingularObjective<'_> {
    fn evaluate(&self, b: &ComplexMatrix, _angle: f64) -> Evaluation {
        let (m, n, k) = (self.x.m(), self.x.n(), b.ncols());
        let l = frame::lift_matrix(m, b);
        let c = l.adjoint() * self.x.matrix() * &l;
        let (s, u, w) = top_singular_triple(&c);
        let vu = &l * &u;
        let vw = &l * &w;
        let grad =
            frame::contract(&u, &(self.x.matrix() * &vw), m, n, k) + frame::contract(&w, &(&self.xa * &vu), m, n, k);
        Evaluation { value: s, grad, angle_grad: 0.0 }
    }
}

/// `λ_max(Re(e^{iθ} C))` of the compression `C`, optionally ascending in θ too.
pub(crate) struct HermitianTopObjective<'a> {
    pub x: &'a BipartiteOperator,
    pub xa: ComplexMatrix,
    pub rotate: bool,
}

impl<'a> HermitianTopObjective<'a> {
    pub fn new(x: &'a BipartiteOperator, rotate: bool) -> Self {
        Self { x, xa: x.matrix().adjoint(), rotate }
    }

    /// Top eigenpair `(λ, a)` of `Re(e^{iθ} C)` and the lifted vector `L a`.
    pub fn top(&self, b: &ComplexMatrix, angle: f64) -> (f64, ComplexVector, ComplexVector) {
        let l = frame::lift_matrix(self.x.m(), b);
        let c = l.adjoint() * self.x.matrix() * &l;
        let (lambda, a) = linalg::spectral::rotated_top(&c, angle);
        let v = &l * &a;
        (lambda, a, v)
    }
}

impl FrameObjective for HermitianTopObjective<'_> {
    fn evaluate(&self, b: &ComplexMatrix, angle: f64) -> Evaluation {
        let (m, n, k) = (self.x.m(), self.x.n(), b.ncols());
        let (lambda, a, v) = self.top(b, angle);
        let phase = C64::from_polar(1.0, angle);
        let xv = self.x.matrix() * &v;
        let y = &xv * phase + (&self.xa * &v) * phase.conj();
        let grad = frame::contract(&a, &y, m, n, k);
        let angle_grad = if self.rotate { -(phase * v.dotc(&xv)).im } else { 0.0 };
        Evaluation { value: lambda, grad, angle_grad }
    }

    fn uses_angle(&self) -> bool {
        self.rotate
    }
}

fn restart_frame(n: usize, k: usize, cfg: &SeeSawConfig, index: usize) -> ComplexMatrix {
    let mut rng = cfg.rng.fork(index as u64).rng();
    random_frame(n, k, &mut rng).matrix().clone()
}

/// Lower bound on the k-super-minimal matrix-order norm: the supremum of
/// `|<v|X|w>|` over `SR(v), SR(w) ≤ k` with `(P ⊗ I)|v> = |w>` for some `P`.
///
/// Such pairs are exactly `v = Σ a_r ⊗ b_r`, `w = Σ c_r ⊗ b_r` over a shared
/// frame `{b_r}`, so the value is `sup_frames ‖compress(X, frame)‖`. The inner
/// operator norm is exact; frames are improved by projected-gradient ascent.
pub fn omin_norm(x: &BipartiteOperator, k: usize, cfg: &SeeSawConfig) -> Result<NormEstimate> {
    cfg.validate()?;
    let dims = x.dims();
    check_rank(k, dims.n)?;
    if k == dims.n {
        let (s, u, v) = top_singular_triple(x.matrix());
        let witness = Witness::Pair {
            left: PureState::normalized(u, dims.m, dims.n)?,
            right: PureState::normalized(v, dims.m, dims.n)?,
        };
        return Ok(NormEstimate::exact(s, Some(witness)));
    }
    let obj = SingularObjective { x, xa: x.matrix().adjoint() };
    let runs = map_indexed(cfg.restarts, |i| ascend(&obj, restart_frame(dims.n, k, cfg, i), 0.0, cfg.ascent()));
    let best = argmax_first(&runs, |r| r.value).expect("at least one restart");
    let b = &runs[best];

    let l = frame::lift_matrix(dims.m, &b.frame);
    let c = l.adjoint() * x.matrix() * &l;
    let (_, u, w) = top_singular_triple(&c);
    let left = PureState::normalized(&l * u, dims.m, dims.n)?;
    let right = PureState::normalized(&l * w, dims.m, dims.n)?;
    let value = x.sandwich(left.amplitudes(), right.amplitudes()).norm();
    Ok(NormEstimate {
        value,
        direction: Direction::Lower,
        witness: Some(Witness::Pair { left, right }),
        restarts_used: runs.len(),
        iterations: runs.iter().map(|r| r.iterations).sum(),
        converged: b.converged,
        history: runs.into_iter().map(|r| r.history).collect(),
    })
}

/// Lower bound on the minimal order norm `sup |<v|X|v>|` over `SR(v) ≤ k`,
/// i.e. `sup_frames w(compress(X, frame))` with `w` the numerical radius.
///
/// The rotation angle of `Re(e^{iθ} C)` is optimized jointly with the frame;
/// the final frame is re-scored with the full grid numerical radius and the
/// reported value is `|<v|X|v>|` at the returned witness.
pub fn min_order_norm(x: &BipartiteOperator, k: usize, cfg: &SeeSawConfig) -> Result<NormEstimate> {
    cfg.validate()?;
    let dims = x.dims();
    check_rank(k, dims.min())?;
    if k == dims.min() {
        let (_, _, a) = numerical_radius_with_angle(x.matrix())?;
        let v = PureState::normalized(a, dims.m, dims.n)?;
        let value = x.expectation(&v).norm();
        let mut est = NormEstimate::exact(value, Some(Witness::Vector(v)));
        if !x.is_hermitian() {
            est.direction = Direction::Lower;
        }
        return Ok(est);
    }

    let obj = HermitianTopObjective::new(x, true);
    let runs = map_indexed(cfg.restarts, |i| {
        let start = restart_frame(dims.n, k, cfg, i);
        let c = frame::compress_raw(x, &start);
        let theta = numerical_radius_with_angle(&c).map(|(_, t, _)| t).unwrap_or(0.0);
        ascend(&obj, start, theta, cfg.ascent())
    });
    let best = argmax_first(&runs, |r| r.value).expect("at least one restart");
    let b = &runs[best];

    // candidates: the ascent's own angle and a fresh grid search on the final frame
    let (_, _, v_ascent) = obj.top(&b.frame, b.angle);
    let c = frame::compress_raw(x, &b.frame);
    let (_, theta, _) = numerical_radius_with_angle(&c)?;
    let (_, _, v_grid) = obj.top(&b.frame, theta);
    let mut best_vec = None;
    let mut value = f64::NEG_INFINITY;
    for cand in [v_ascent, v_grid] {
        let state = PureState::normalized(cand, dims.m, dims.n)?;
        let val = x.expectation(&state).norm();
        if val > value {
            value = val;
            best_vec = Some(state);
        }
    }
    Ok(NormEstimate {
        value,
        direction: Direction::Lower,
        witness: best_vec.map(Witness::Vector),
        restarts_used: runs.len(),
        iterations: runs.iter().map(|r| r.iterations).sum(),
        converged: b.converged,
        history: runs.into_iter().map(|r| r.history).collect(),
    })
}

// ---------------------------------------------------------------------------
// order norms of non-Hermitian operators

/// Cartesian split `X = H1 + i H2` with `H1 = (X + X*)/2`, `H2 = (X - X*)/(2i)`.
pub fn cartesian_parts(x: &BipartiteOperator) -> (BipartiteOperator, BipartiteOperator) {
    let dims = x.dims();
    let h1 = hermitian_part(x.matrix());
    let h2 = (x.matrix() - x.matrix().adjoint()) * C64::new(0.0, -0.5);
    (
        BipartiteOperator::new(h1, dims.m, dims.n).expect("same dims"),
        BipartiteOperator::new(h2, dims.m, dims.n).expect("same dims"),
    )
}

fn is_zero(x: &ComplexMatrix) -> bool {
    x.iter().all(|z| z.norm() == 0.0)
}

fn order_norm_hermitian(h: &BipartiteOperator, k: usize, cfg: &SeeSawConfig) -> Result<f64> {
    if is_zero(h.matrix()) {
        return Ok(0.0);
    }
    Ok(min_order_norm(h, k, cfg)?.value)
}

/// Upper estimate of the maximal order norm from the single split
/// `X = H1 + i H2`: `‖H1‖_or + ‖H2‖_or`.
///
/// Order norms of the Hermitian parts come from [`min_order_norm`], which is
/// exact on Hermitian operators up to the frame search.
pub fn max_order_norm_upper(x: &BipartiteOperator, k: usize, cfg: &SeeSawConfig) -> Result<NormEstimate> {
    cfg.validate()?;
    check_rank(k, x.dims().min())?;
    let (h1, h2) = cartesian_parts(x);
    let t1 = order_norm_hermitian(&h1, k, &cfg.fork(1))?;
    let t2 = order_norm_hermitian(&h2, k, &cfg.fork(2))?;
    Ok(NormEstimate {
        value: t1 + t2,
        direction: Direction::Upper,
        witness: None,
        restarts_used: 2 * cfg.restarts,
        iterations: 0,
        converged: true,
        history: Vec::new(),
    })
}

/// One term `λ P` of a decomposition `X = Σ λ_i P_i`.
pub type DecompositionPart = (C64, BipartiteOperator);

/// `‖Σ |λ_i| P_i‖_or` for one supplied decomposition into k-block-positive parts.
///
/// This is an upper bound on the decomposition norm, which is the infimum
/// over all such decompositions.
pub fn dec_norm_value(
    x: &BipartiteOperator,
    parts: &[DecompositionPart],
    k: usize,
    cfg: &SeeSawConfig,
) -> Result<NormEstimate> {
    cfg.validate()?;
    let dims = x.dims();
    check_rank(k, dims.min())?;
    if parts.is_empty() {
        return Err(Error::DecompositionMismatch { residual: linalg::operator_norm(x.matrix()) });
    }
    let mut sum = ComplexMatrix::zeros(dims.total(), dims.total());
    let mut abs_sum = ComplexMatrix::zeros(dims.total(), dims.total());
    for (lambda, p) in parts {
        if p.dims() != dims {
            return Err(Error::DimensionMismatch("decomposition part dimensions".into()));
        }
        sum += p.matrix() * *lambda;
        abs_sum += p.matrix() * C64::new(lambda.norm(), 0.0);
    }
    let residual = max_abs_diff(&sum, x.matrix());
    if residual > RECON_TOL {
        return Err(Error::DecompositionMismatch { residual });
    }
    for (index, (_, p)) in parts.iter().enumerate() {
        let verdict = cones::k_block_positivity(p, k, &cfg.fork(100 + index as u64))?;
        if verdict.status == BlockStatus::Refuted {
            return Err(Error::NotBlockPositive { index, min_value: verdict.min_value });
        }
    }
    let s = BipartiteOperator::new(abs_sum, dims.m, dims.n)?;
    let est = min_order_norm(&s, k, cfg)?;
    Ok(NormEstimate { direction: Direction::Upper, ..est })
}

/// Decomposition through the order unit: with `t_j = ‖H_j‖_or`,
/// `H_j = ((t_j I + H_j) - (t_j I - H_j)) / 2` and both brackets are k-block positive.
pub fn order_unit_decomposition(x: &BipartiteOperator, k: usize, cfg: &SeeSawConfig) -> Result<Vec<DecompositionPart>> {
    let dims = x.dims();
    let (h1, h2) = cartesian_parts(x);
    let id = ComplexMatrix::identity(dims.total(), dims.total());
    let mut parts = Vec::new();
    for (j, (h, coeff)) in [(h1, C64::new(0.5, 0.0)), (h2, C64::new(0.0, 0.5))].into_iter().enumerate() {
        if is_zero(h.matrix()) {
            continue;
        }
        // relative 1e-12 margin absorbs rounding in the frame search
        let t = order_norm_hermitian(&h, k, &cfg.fork(1 + j as u64))? * (1.0 + 1e-12);
        let plus = BipartiteOperator::new(&id * C64::new(t, 0.0) + h.matrix(), dims.m, dims.n)?;
        let minus = BipartiteOperator::new(&id * C64::new(t, 0.0) - h.matrix(), dims.m, dims.n)?;
        parts.push((coeff, plus));
        parts.push((-coeff, minus));
    }
    Ok(parts)
}

/// Decomposition into positive semidefinite parts `X = P1 - N1 + i(P2 - N2)`.
pub fn jordan_decomposition(x: &BipartiteOperator) -> Vec<DecompositionPart> {
    let dims = x.dims();
    let (h1, h2) = cartesian_parts(x);
    let mut parts = Vec::new();
    for (h, coeff) in [(h1, C64::new(1.0, 0.0)), (h2, C64::new(0.0, 1.0))] {
        if is_zero(h.matrix()) {
            continue;
        }
        let (vals, vecs) = hermitian_eigen(h.matrix());
        let mut pos = ComplexMatrix::zeros(dims.total(), dims.total());
        let mut neg = ComplexMatrix::zeros(dims.total(), dims.total());
        for (i, &lam) in vals.iter().enumerate() {
            let e = vecs.column(i);
            let proj = e * e.adjoint();
            if lam >= 0.0 {
                pos += proj * C64::new(lam, 0.0);
            } else {
                neg += proj * C64::new(-lam, 0.0);
            }
        }
        parts.push((coeff, BipartiteOperator::new(pos, dims.m, dims.n).expect("dims")));
        parts.push((-coeff, BipartiteOperator::new(neg, dims.m, dims.n).expect("dims")));
    }
    parts
}

/// Smallest [`dec_norm_value`] over the order-unit and positive-part decompositions.
pub fn dec_norm_best(x: &BipartiteOperator, k: usize, cfg: &SeeSawConfig) -> Result<NormEstimate> {
    let a = dec_norm_value(x, &order_unit_decomposition(x, k, cfg)?, k, cfg)?;
    let b = dec_norm_value(x, &jordan_decomposition(x), k, cfg)?;
    Ok(if b.value < a.value { b } else { a })
}

// ---------------------------------------------------------------------------
// k-maximal operator space norm

/// Two-sided bounds on the k-maximal operator space norm of `X ∈ M_m(M_r)`.
///
/// Upper: explicit factorizations `X = A · diag(x_1, …) · B*` with
/// `‖x_i‖ ≤ 1`. For `m ≤ k` the trivial factorization gives exactly `‖X‖`;
/// otherwise `X` is cut into `k`-row by `k`-column bands.
/// Lower: `‖(Φ(X_ij))‖` over maps with `‖id_k ⊗ Φ‖ ≤ 1` whose norm is known in
/// closed form (identity, scaled transpose, and channels scaled by `1/‖Φ(I)‖`).
pub fn maxk_space_norm_bounds(
    x: &BipartiteOperator,
    k: usize,
    cfg: &SeeSawConfig,
) -> Result<(NormEstimate, NormEstimate)> {
    cfg.validate()?;
    if k == 0 {
        return Err(Error::RankOutOfRange { k, max: usize::MAX });
    }
    let Dims { m, n: r } = x.dims();
    let norm = operator_norm(x.matrix());
    if m <= k {
        return Ok((NormEstimate::exact(norm, None), NormEstimate::exact(norm, None)));
    }

    let upper = banded_factorization_bound(x, k);

    let mut values = vec![norm];
    let transpose = MapRepr::transpose(r);
    values.push(operator_norm(&transpose.apply_idk(m, x.matrix())?) / k.min(r) as f64);
    let samples = map_indexed(cfg.restarts, |i| -> Result<f64> {
        let mut rng = cfg.rng.fork(i as u64).rng();
        let phi = MapRepr::from_kraus(&linalg::random_cptp(r, r, &mut rng))?;
        let scale = operator_norm(&phi.apply(&ComplexMatrix::identity(r, r))?);
        Ok(operator_norm(&phi.apply_idk(m, x.matrix())?) / scale)
    });
    for s in samples {
        values.push(s?);
    }
    let lower = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let est = |value, direction| NormEstimate {
        value,
        direction,
        witness: None,
        restarts_used: cfg.restarts,
        iterations: 0,
        converged: true,
        history: Vec::new(),
    };
    Ok((est(lower, Direction::Lower), est(upper, Direction::Upper)))
}

/// `sqrt(max_a Σ_b ‖X_ab‖ · max_b Σ_a ‖X_ab‖)` over `k`-banded blocks `X_ab`.
fn banded_factorization_bound(x: &BipartiteOperator, k: usize) -> f64 {
    let Dims { m, n: r } = x.dims();
    let bands: Vec<(usize, usize)> = (0..m).step_by(k).map(|s| (s, k.min(m - s))).collect();
    let p = bands.len();
    let mut norms = vec![vec![0.0; p]; p];
    for (a, &(ra, la)) in bands.iter().enumerate() {
        for (b, &(cb, lb)) in bands.iter().enumerate() {
            let block = x.matrix().view((ra * r, cb * r), (la * r, lb * r)).into_owned();
            norms[a][b] = operator_norm(&block);
        }
    }
    let row_max = (0..p).map(|a| norms[a].iter().sum::<f64>()).fold(0.0, f64::max);
    let col_max = (0..p).map(|b| (0..p).map(|a| norms[a][b]).sum::<f64>()).fold(0.0, f64::max);
    (row_max * col_max).sqrt()
}
