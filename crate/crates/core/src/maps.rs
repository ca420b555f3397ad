//! Linear maps `Φ: M_r → M_n` in Choi form and their stabilized norms.

use crate::cones::{self, BlockPositivityVerdict, SchmidtEnsemble, WitnessCertificate, REFUTE_TOL};
use crate::error::{Error, Result};
use crate::linalg::{
    ensure_hermitian, hermitian_eigen, hermitian_part, is_hermitian, max_abs_diff, min_eig_hermitian, operator_norm,
    polar_unitary, random_unit_vector, random_unitary, top_singular_triple, trace_norm, BipartiteOperator,
    ComplexMatrix, ComplexVector, C64, HERM_TOL, RECON_TOL,
};
use crate::norms::{SeeSawConfig, EVAL_TOL};
use crate::parallel::{argmax_first, map_indexed};

/// `Φ: M_r → M_n` stored as `J(Φ) = Σ |i><j| ⊗ Φ(|i><j|)` with dims `(r, n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MapRepr {
    choi: BipartiteOperator,
}

impl MapRepr {
    pub fn from_choi(choi: BipartiteOperator) -> Self {
        Self { choi }
    }

    /// `X ↦ Σ K X K*` for `n × r` Kraus operators.
    pub fn from_kraus(kraus: &[ComplexMatrix]) -> Result<Self> {
        let first = kraus.first().ok_or_else(|| Error::Precondition("no Kraus operators".into()))?;
        let (n, r) = first.shape();
        if kraus.iter().any(|k| k.shape() != (n, r)) {
            return Err(Error::DimensionMismatch("Kraus operators differ in shape".into()));
        }
        Ok(Self::from_fn(r, n, |x| kraus.iter().fold(ComplexMatrix::zeros(n, n), |acc, k| acc + k * x * k.adjoint())))
    }

    /// Tabulates a linear `f: M_r → M_n` on matrix units.
    pub fn from_fn(r: usize, n: usize, f: impl Fn(&ComplexMatrix) -> ComplexMatrix) -> Self {
        let mut j = ComplexMatrix::zeros(r * n, r * n);
        for a in 0..r {
            for b in 0..r {
                let mut e = ComplexMatrix::zeros(r, r);
                e[(a, b)] = C64::new(1.0, 0.0);
                j.view_mut((a * n, b * n), (n, n)).copy_from(&f(&e));
            }
        }
        Self { choi: BipartiteOperator::new(j, r, n).expect("square by construction") }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |x| x.clone())
    }

    pub fn transpose(n: usize) -> Self {
        Self::from_fn(n, n, |x| x.transpose())
    }

    /// `Ω(X) = Tr(X) I/n`.
    pub fn depolarizing(n: usize) -> Self {
        Self::from_fn(n, n, |x| ComplexMatrix::identity(n, n) * (x.trace() / n as f64))
    }

    /// `Φ_p(X) = Tr(X) I − p X`.
    pub fn reduction(n: usize, p: f64) -> Self {
        Self::from_fn(n, n, |x| ComplexMatrix::identity(n, n) * x.trace() - x * C64::new(p, 0.0))
    }

    /// A random channel `M_r → M_n` from a Haar-random Stinespring isometry.
    pub fn random_cptp<R: rand::Rng + ?Sized>(r: usize, n: usize, rng: &mut R) -> Self {
        Self::from_kraus(&crate::linalg::random_cptp(r, n, rng)).expect("nonempty Kraus family")
    }

    pub fn in_dim(&self) -> usize {
        self.choi.m()
    }

    pub fn out_dim(&self) -> usize {
        self.choi.n()
    }

    pub fn choi(&self) -> &BipartiteOperator {
        &self.choi
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { choi: self.choi.scale(C64::new(s, 0.0)) }
    }

    /// The Hilbert-Schmidt adjoint `Φ*: M_n → M_r`.
    pub fn adjoint(&self) -> Self {
        let (r, n) = (self.in_dim(), self.out_dim());
        let j = self.choi.matrix();
        let mut out = ComplexMatrix::zeros(r * n, r * n);
        for i in 0..r {
            for jj in 0..r {
                for p in 0..n {
                    for q in 0..n {
                        out[(p * r + i, q * r + jj)] = j[(i * n + p, jj * n + q)].conj();
                    }
                }
            }
        }
        Self { choi: BipartiteOperator::new(out, n, r).expect("square by construction") }
    }

    pub fn is_hermiticity_preserving(&self) -> bool {
        self.choi.is_hermitian()
    }

    pub fn is_completely_positive(&self) -> bool {
        self.is_hermiticity_preserving()
            && min_eig_hermitian(self.choi.matrix()).map(|e| e >= -RECON_TOL).unwrap_or(false)
    }

    pub fn is_trace_preserving(&self) -> bool {
        let r = self.in_dim();
        max_abs_diff(&self.choi.partial_trace_right(), &ComplexMatrix::identity(r, r)) <= RECON_TOL
    }

    fn ensure_hermitian_choi(&self) -> Result<()> {
        ensure_hermitian(self.choi.matrix())
    }

    fn ensure_cp(&self) -> Result<()> {
        self.ensure_hermitian_choi()?;
        let min_eig = min_eig_hermitian(self.choi.matrix())?;
        if min_eig < -RECON_TOL {
            return Err(Error::NotPositive { min_eig });
        }
        Ok(())
    }

    /// `Φ(X)`.
    pub fn apply(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        let (r, n) = (self.in_dim(), self.out_dim());
        if x.shape() != (r, r) {
            return Err(Error::DimensionMismatch(format!("map input is {r}×{r}, got {}×{}", x.nrows(), x.ncols())));
        }
        let j = self.choi.matrix();
        let mut out = ComplexMatrix::zeros(n, n);
        for a in 0..r {
            for b in 0..r {
                let c = x[(a, b)];
                if c == C64::new(0.0, 0.0) {
                    continue;
                }
                out += j.view((a * n, b * n), (n, n)) * c;
            }
        }
        Ok(out)
    }

    /// `(id_k ⊗ Φ)(Y)` for `Y ∈ M_k ⊗ M_r`.
    pub fn apply_idk(&self, k: usize, y: &ComplexMatrix) -> Result<ComplexMatrix> {
        let (r, n) = (self.in_dim(), self.out_dim());
        if y.shape() != (k * r, k * r) {
            return Err(Error::DimensionMismatch(format!(
                "expected a {0}×{0} input, got {1}×{2}",
                k * r,
                y.nrows(),
                y.ncols()
            )));
        }
        let mut out = ComplexMatrix::zeros(k * n, k * n);
        for a in 0..k {
            for b in 0..k {
                let block = y.view((a * r, b * r), (r, r)).into_owned();
                out.view_mut((a * n, b * n), (n, n)).copy_from(&self.apply(&block)?);
            }
        }
        Ok(out)
    }
}

/// Contractivity of the identity-padded map: `k`-positive iff the Choi matrix is k-block positive.
pub fn k_positivity(phi: &MapRepr, k: usize, cfg: &SeeSawConfig) -> Result<BlockPositivityVerdict> {
    phi.ensure_hermitian_choi()?;
    cones::k_block_positivity(phi.choi(), k, cfg)
}

fn normalized_choi(phi: &MapRepr) -> Result<BipartiteOperator> {
    phi.ensure_cp()?;
    let tr = phi.choi().trace().re;
    if tr <= 0.0 {
        return Err(Error::Precondition("Choi matrix has zero trace".into()));
    }
    Ok(phi.choi().scale(C64::new(1.0 / tr, 0.0)))
}

/// Certifies that a CP map is k-partially entanglement breaking from an
/// ensemble decomposition of its normalized Choi matrix.
pub fn k_peb_certify(phi: &MapRepr, ens: &SchmidtEnsemble) -> Result<bool> {
    cones::sn_upper_verify(&normalized_choi(phi)?, ens)
}

/// Pairs the normalized Choi matrix with a k-witness. A valid certificate
/// shows the map is not k-partially entanglement breaking. Without an explicit
/// witness the reduction witness `I − (n/k)|φ><φ|` is used (square maps only).
pub fn k_peb_refute(
    phi: &MapRepr,
    k: usize,
    witness: Option<&BipartiteOperator>,
    cfg: &SeeSawConfig,
) -> Result<WitnessCertificate> {
    let rho = normalized_choi(phi)?;
    let w = match witness {
        Some(w) => w.clone(),
        None => {
            if phi.in_dim() != phi.out_dim() {
                return Err(Error::Precondition("the default witness needs equal input and output dimensions".into()));
            }
            cones::reduction_witness(phi.in_dim(), k)?
        }
    };
    cones::witness_check(&w, &rho, k, cfg)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MapDirection {
    Lower,
    /// A lower bound that matches a closed-form value within `EVAL_TOL`.
    ExactFlagged,
}

#[derive(Debug, Clone, PartialEq)]
pub enum AttainingInput {
    /// Unit-ball input `X` for `‖(id_k ⊗ Φ)(X)‖`.
    Matrix(ComplexMatrix),
    /// Unit vector `u` for `‖(id_k ⊗ Φ)(|u><u|)‖_tr`.
    Vector(ComplexVector),
}

#[derive(Debug, Clone)]
pub struct MapNormEstimate {
    pub value: f64,
    pub direction: MapDirection,
    pub k: usize,
    pub attaining_input: Option<AttainingInput>,
    pub restarts_used: usize,
    pub iterations: usize,
    pub converged: bool,
    pub history: Vec<Vec<f64>>,
}

impl MapNormEstimate {
    /// Recomputes the objective at the attaining input.
    pub fn reevaluate(&self, phi: &MapRepr) -> Result<f64> {
        match &self.attaining_input {
            Some(AttainingInput::Matrix(x)) => Ok(operator_norm(&phi.apply_idk(self.k, x)?)),
            Some(AttainingInput::Vector(u)) => {
                let p = phi.apply_idk(self.k, &(u * u.adjoint()))?;
                Ok(trace_norm(&p))
            }
            None => Err(Error::Precondition("estimate has no attaining input".into())),
        }
    }
}

struct MapRun {
    value: f64,
    input: AttainingInput,
    iterations: usize,
    converged: bool,
    history: Vec<f64>,
}

fn idk_restart(phi: &MapRepr, adj: &MapRepr, k: usize, cfg: &SeeSawConfig, index: usize) -> Result<MapRun> {
    let d = k * phi.in_dim();
    let mut x = if index == 0 {
        ComplexMatrix::identity(d, d)
    } else {
        let mut rng = cfg.rng.fork(index as u64).rng();
        random_unitary(d, &mut rng)
    };
    let (mut value, mut v, mut w) = top_singular_triple(&phi.apply_idk(k, &x)?);
    let mut history = vec![value];
    let mut iterations = 0;
    let mut converged = false;
    while iterations < cfg.max_iters {
        iterations += 1;
        let g = adj.apply_idk(k, &(&v * w.adjoint()))?;
        let cand = polar_unitary(&g);
        let (s, cv, cw) = top_singular_triple(&phi.apply_idk(k, &cand)?);
        if s < value {
            converged = true;
            break;
        }
        let gain = s - value;
        x = cand;
        value = s;
        v = cv;
        w = cw;
        history.push(value);
        if gain <= cfg.obj_tol {
            converged = true;
            break;
        }
    }
    Ok(MapRun { value, input: AttainingInput::Matrix(x), iterations, converged, history })
}

fn collect_runs(runs: Vec<Result<MapRun>>, k: usize) -> Result<MapNormEstimate> {
    let runs = runs.into_iter().collect::<Result<Vec<_>>>()?;
    let best = argmax_first(&runs, |r| r.value).expect("at least one restart");
    let b = &runs[best];
    Ok(MapNormEstimate {
        value: b.value,
        direction: MapDirection::Lower,
        k,
        attaining_input: Some(b.input.clone()),
        restarts_used: runs.len(),
        iterations: runs.iter().map(|r| r.iterations).sum(),
        converged: b.converged,
        history: runs.iter().map(|r| r.history.clone()).collect(),
    })
}

/// Lower bound on `‖id_k ⊗ Φ‖ = sup{‖(id_k ⊗ Φ)(X)‖ : ‖X‖ ≤ 1}`.
///
/// For fixed unit `v`, `w` the best `X` is the polar unitary of
/// `(id_k ⊗ Φ*)(|v><w|)`; for fixed `X` the best pair is the top singular pair.
/// Restart 0 starts from `X = I`, where CP maps attain their norm.
pub fn idk_op_norm(phi: &MapRepr, k: usize, cfg: &SeeSawConfig) -> Result<MapNormEstimate> {
    cfg.validate()?;
    if k == 0 {
        return Err(Error::RankOutOfRange { k, max: usize::MAX });
    }
    let adj = phi.adjoint();
    let runs = map_indexed(cfg.restarts, |i| idk_restart(phi, &adj, k, cfg, i));
    let mut est = collect_runs(runs, k)?;
    if phi.is_completely_positive() {
        let r = phi.in_dim();
        let target = operator_norm(&phi.apply(&ComplexMatrix::identity(r, r))?);
        if (est.value - target).abs() <= EVAL_TOL {
            est.direction = MapDirection::ExactFlagged;
        }
    }
    Ok(est)
}

fn sign_part(p: &ComplexMatrix) -> (f64, ComplexMatrix) {
    let (vals, vecs) = hermitian_eigen(p);
    let d = p.nrows();
    let mut s = ComplexMatrix::zeros(d, d);
    let mut norm = 0.0;
    for (i, &lam) in vals.iter().enumerate() {
        norm += lam.abs();
        let e = vecs.column(i);
        let sign = if lam >= 0.0 { 1.0 } else { -1.0 };
        s += (e * e.adjoint()) * C64::new(sign, 0.0);
    }
    (norm, s)
}

fn trnorm_restart(phi: &MapRepr, adj: &MapRepr, k: usize, cfg: &SeeSawConfig, index: usize) -> Result<MapRun> {
    let d = k * phi.in_dim();
    let mut rng = cfg.rng.fork(index as u64).rng();
    let mut u = random_unit_vector(d, &mut rng);
    let out =
        |u: &ComplexVector| -> Result<ComplexMatrix> { Ok(hermitian_part(&phi.apply_idk(k, &(u * u.adjoint()))?)) };
    let (mut value, mut s) = sign_part(&out(&u)?);
    let mut history = vec![value];
    let mut iterations = 0;
    let mut converged = false;
    while iterations < cfg.max_iters {
        iterations += 1;
        let m = hermitian_part(&adj.apply_idk(k, &s)?);
        let (_, vecs) = hermitian_eigen(&m);
        let cand = vecs.column(d - 1).into_owned();
        let (val, cs) = sign_part(&out(&cand)?);
        if val < value {
            converged = true;
            break;
        }
        let gain = val - value;
        u = cand;
        value = val;
        s = cs;
        history.push(value);
        if gain <= cfg.obj_tol {
            converged = true;
            break;
        }
    }
    Ok(MapRun { value, input: AttainingInput::Vector(u), iterations, converged, history })
}

/// Lower bound on `‖id_k ⊗ Φ‖_tr^H`, the largest trace norm of
/// `(id_k ⊗ Φ)(X)` over Hermitian `X` with `‖X‖_tr ≤ 1`.
///
/// The supremum is attained at a rank-one projection `|u><u|`. For fixed `u`
/// the dual Hermitian contraction is `S = sign((id_k ⊗ Φ)(|u><u|))`; for fixed
/// `S` the best `u` is the top eigenvector of `(id_k ⊗ Φ*)(S)`. The objective
/// is nondecreasing along this alternation.
pub fn hermitian_trace_norm(phi: &MapRepr, k: usize, cfg: &SeeSawConfig) -> Result<MapNormEstimate> {
    cfg.validate()?;
    phi.ensure_hermitian_choi()?;
    if k == 0 {
        return Err(Error::RankOutOfRange { k, max: usize::MAX });
    }
    let adj = phi.adjoint();
    let runs = map_indexed(cfg.restarts, |i| trnorm_restart(phi, &adj, k, cfg, i));
    let mut est = collect_runs(runs, k)?;
    if phi.is_completely_positive() && phi.is_trace_preserving() && (est.value - 1.0).abs() <= EVAL_TOL {
        est.direction = MapDirection::ExactFlagged;
    }
    Ok(est)
}

/// `sup{|<v|(id_m ⊗ Φ)(X)|v>| : ‖X‖ ≤ 1, X = X*, SR(v) ≤ k}` for any `m ≥ k`,
/// computed at the level `m = k` as `‖id_k ⊗ Φ*‖_tr^H`.
pub fn idk_hermitian_sandwich_norm(phi: &MapRepr, k: usize, cfg: &SeeSawConfig) -> Result<MapNormEstimate> {
    phi.ensure_hermitian_choi()?;
    hermitian_trace_norm(&phi.adjoint(), k, cfg)
}

/// Block-diagonal map `X ↦ Ψ'(X) ⊕ (Ω − Ψ')(X)` into `M_{2n}`, `Ω(X) = Tr(X) I/n`.
///
/// `Ψ' = Ψ` when its trace norm on positive inputs is at most `1/n`;
/// otherwise `Ψ' = Ψ · 0.9/(n · est)` with `est` that norm's estimate.
/// The result is trace preserving, and k-positive whenever `Ψ` is.
pub fn detection_map(psi: &MapRepr, cfg: &SeeSawConfig) -> Result<MapRepr> {
    psi.ensure_hermitian_choi()?;
    let (r, n) = (psi.in_dim(), psi.out_dim());
    let est = hermitian_trace_norm(psi, 1, cfg)?.value;
    let limit = 1.0 / n as f64;
    let scaled = if est > limit + EVAL_TOL { psi.scale(0.9 * limit / est) } else { psi.clone() };
    Ok(MapRepr::from_fn(r, 2 * n, |x| {
        let y = scaled.apply(x).expect("input shape fixed by from_fn");
        let omega = ComplexMatrix::identity(n, n) * (x.trace() * limit);
        let mut out = ComplexMatrix::zeros(2 * n, 2 * n);
        out.view_mut((0, 0), (n, n)).copy_from(&y);
        out.view_mut((n, n), (n, n)).copy_from(&(omega - &y));
        out
    }))
}

/// How the contraction hypothesis `‖id_k ⊗ Φ‖_tr^H ≤ 1` is established.
#[derive(Debug, Clone, Copy)]
pub enum ContractionBound {
    /// The caller vouches for the bound.
    Certified,
    /// Estimate the norm and reject maps that exceed `1 + EVAL_TOL`.
    Computed(SeeSawConfig),
}

#[derive(Debug, Clone)]
pub struct ContractionOutcome {
    pub detected: bool,
    pub trace_norm: f64,
    /// The estimated `‖id_k ⊗ Φ‖_tr^H`, when computed.
    pub map_norm: Option<f64>,
    pub min_eigenvalue: f64,
    /// Eigenvector of the most negative eigenvalue of `(id_m ⊗ Φ)(ρ)`.
    pub witness: ComplexVector,
}

/// Contraction test: `‖(id_m ⊗ Φ)(ρ)‖_tr > 1` for a map with
/// `‖id_k ⊗ Φ‖_tr^H ≤ 1` shows `SN(ρ) > k`.
pub fn sn_contraction_test(
    rho: &BipartiteOperator,
    phi: &MapRepr,
    k: usize,
    bound: ContractionBound,
) -> Result<ContractionOutcome> {
    cones::ensure_state(rho)?;
    let min_eig = min_eig_hermitian(rho.matrix())?;
    if min_eig < -RECON_TOL {
        return Err(Error::NotPositive { min_eig });
    }
    if rho.n() != phi.in_dim() {
        return Err(Error::DimensionMismatch(format!(
            "map acts on M_{}, state's second factor is C^{}",
            phi.in_dim(),
            rho.n()
        )));
    }
    if !is_hermitian(phi.choi().matrix(), HERM_TOL) {
        return Err(Error::Precondition("map is not Hermiticity-preserving".into()));
    }
    let map_norm = match bound {
        ContractionBound::Certified => None,
        ContractionBound::Computed(cfg) => {
            let v = hermitian_trace_norm(phi, k, &cfg)?.value;
            if v > 1.0 + EVAL_TOL {
                return Err(Error::Precondition(format!("estimated ‖id_{k} ⊗ Φ‖_tr^H = {v} exceeds 1")));
            }
            Some(v)
        }
    };
    let out = hermitian_part(&phi.apply_idk(rho.m(), rho.matrix())?);
    let (vals, vecs) = hermitian_eigen(&out);
    let tn: f64 = vals.iter().map(|l| l.abs()).sum();
    Ok(ContractionOutcome {
        detected: tn > 1.0 + REFUTE_TOL,
        trace_norm: tn,
        map_norm,
        min_eigenvalue: vals[0],
        witness: vecs.column(0).into_owned(),
    })
}
