//! k-block positivity and Schmidt-number certificates.
//!
//! An operator is k-block positive when `<v|X|v> ≥ 0` for every `v` with
//! `SR(v) ≤ k`; a state has Schmidt number at most `k` when it is a mixture of
//! such pure states. The two cones are dual under `Tr(Wρ)`.

use crate::error::{Error, Result};
use crate::frame::{ascend, Frame};
use crate::linalg::{
    ensure_hermitian, hermitian_eigen, max_abs_diff, random_frame, schmidt_rank, trace_product_re, BipartiteOperator,
    ComplexMatrix, Dims, PureState, C64, RANK_TOL, RECON_TOL, UNIT_TOL,
};
use crate::norms::{check_rank, HermitianTopObjective, SeeSawConfig};
use crate::parallel::{argmax_first, map_indexed};

/// Values below `-REFUTE_TOL` count as genuine negativity.
pub const REFUTE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BlockStatus {
    Refuted,
    HeuristicallyPositive,
}

/// Result of a block-positivity search.
///
/// `HeuristicallyPositive` is one-sided: no SR-≤k vector with negative
/// expectation was found.
#[derive(Debug, Clone)]
pub struct BlockPositivityVerdict {
    pub k: usize,
    pub status: BlockStatus,
    /// `<witness|X|witness>` for the best vector found.
    pub min_value: f64,
    pub witness: Option<PureState>,
    /// Right frame spanning the witness's Schmidt vectors, when a frame search ran.
    pub frame: Option<Frame>,
    pub restarts_used: usize,
    pub iterations: usize,
}

impl BlockPositivityVerdict {
    pub fn is_refuted(&self) -> bool {
        self.status == BlockStatus::Refuted
    }
}

fn status_of(min_value: f64) -> BlockStatus {
    if min_value < -REFUTE_TOL {
        BlockStatus::Refuted
    } else {
        BlockStatus::HeuristicallyPositive
    }
}

/// Minimizes `<v|X|v>` over unit `v` with `SR(v) ≤ k`.
///
/// For a fixed right frame the minimum is the smallest eigenvalue of the
/// compression, computed exactly; frames are improved by projected-gradient
/// descent from `cfg.restarts` random starts. At `k = min(m, n)` the answer
/// is the smallest eigenvalue of `X` itself.
pub fn k_block_positivity(x: &BipartiteOperator, k: usize, cfg: &SeeSawConfig) -> Result<BlockPositivityVerdict> {
    k_block_positivity_from(x, k, cfg, &[])
}

/// [`k_block_positivity`] with extra starting frames tried before the random restarts.
pub fn k_block_positivity_from(
    x: &BipartiteOperator,
    k: usize,
    cfg: &SeeSawConfig,
    starts: &[Frame],
) -> Result<BlockPositivityVerdict> {
    cfg.validate()?;
    ensure_hermitian(x.matrix())?;
    let dims = x.dims();
    check_rank(k, dims.min())?;
    if k == dims.min() {
        let (_, vecs) = hermitian_eigen(x.matrix());
        let v = PureState::normalized(vecs.column(0).into_owned(), dims.m, dims.n)?;
        let min_value = x.expectation(&v).re;
        return Ok(BlockPositivityVerdict {
            k,
            status: status_of(min_value),
            min_value,
            witness: Some(v),
            frame: None,
            restarts_used: 0,
            iterations: 0,
        });
    }
    for f in starts {
        if f.dim() != dims.n || f.k() != k {
            return Err(Error::DimensionMismatch("starting frame shape".into()));
        }
    }

    let neg = x.scale(C64::new(-1.0, 0.0));
    let obj = HermitianTopObjective::new(&neg, false);
    let total = starts.len() + cfg.restarts;
    let runs = map_indexed(total, |i| {
        let start = if i < starts.len() {
            starts[i].matrix().clone()
        } else {
            let mut rng = cfg.rng.fork((i - starts.len()) as u64).rng();
            random_frame(dims.n, k, &mut rng).matrix().clone()
        };
        ascend(&obj, start, 0.0, cfg.ascent())
    });
    let best = argmax_first(&runs, |r| r.value).expect("at least one run");
    let b = &runs[best];
    let (_, _, v) = obj.top(&b.frame, 0.0);
    let v = PureState::normalized(v, dims.m, dims.n)?;
    let min_value = x.expectation(&v).re;
    Ok(BlockPositivityVerdict {
        k,
        status: status_of(min_value),
        min_value,
        witness: Some(v),
        frame: Some(Frame::from_raw(b.frame.clone())),
        restarts_used: total,
        iterations: runs.iter().map(|r| r.iterations).sum(),
    })
}

/// Verdicts for `k = 1, …, min(m, n)`.
///
/// Each level is warm-started from the previous level's best frame extended by
/// one random direction, so `min_value` is nonincreasing in `k`.
pub fn block_positivity_profile(x: &BipartiteOperator, cfg: &SeeSawConfig) -> Result<Vec<BlockPositivityVerdict>> {
    let dims = x.dims();
    let mut out: Vec<BlockPositivityVerdict> = Vec::new();
    for k in 1..=dims.min() {
        let level_cfg = cfg.fork(k as u64);
        let starts = match out.last().and_then(|p| p.frame.as_ref()) {
            Some(prev) if k < dims.min() => {
                let mut rng = level_cfg.rng.fork(u64::MAX).rng();
                let extra = random_frame(dims.n, 1, &mut rng);
                let mut g = ComplexMatrix::zeros(dims.n, k);
                g.columns_mut(0, k - 1).copy_from(prev.matrix());
                g.column_mut(k - 1).copy_from(&extra.matrix().column(0));
                vec![Frame::orthonormalize(&g)?]
            }
            _ => Vec::new(),
        };
        let mut verdict = k_block_positivity_from(x, k, &level_cfg, &starts)?;
        if let Some(prev) = out.last() {
            // a previous witness is feasible at this level too
            if prev.min_value < verdict.min_value {
                verdict.min_value = prev.min_value;
                verdict.witness = prev.witness.clone();
                verdict.status = prev.status;
            }
        }
        out.push(verdict);
    }
    Ok(out)
}

/// A mixture `Σ w_i |v_i><v_i|` of pure states with `SR(v_i) ≤ k`.
#[derive(Debug, Clone)]
pub struct SchmidtEnsemble {
    k: usize,
    dims: Dims,
    terms: Vec<(f64, PureState)>,
}

impl SchmidtEnsemble {
    pub fn new(k: usize, terms: Vec<(f64, PureState)>) -> Result<Self> {
        let first = terms.first().ok_or_else(|| Error::InvalidEnsemble("ensemble has no terms".into()))?;
        let dims = first.1.dims();
        check_rank(k, dims.min()).map_err(|_| Error::InvalidEnsemble(format!("k = {k} out of range")))?;
        let mut total = 0.0;
        for (i, (w, v)) in terms.iter().enumerate() {
            if w.is_nan() || *w <= 0.0 {
                return Err(Error::InvalidEnsemble(format!("term {i}: weight {w} is not positive")));
            }
            if v.dims() != dims {
                return Err(Error::InvalidEnsemble(format!("term {i}: dimensions differ")));
            }
            let sr = schmidt_rank(v, RANK_TOL);
            if sr > k {
                return Err(Error::InvalidEnsemble(format!("term {i}: Schmidt rank {sr} exceeds {k}")));
            }
            total += w;
        }
        if (total - 1.0).abs() > UNIT_TOL {
            return Err(Error::InvalidEnsemble(format!("weights sum to {total}, not 1")));
        }
        Ok(Self { k, dims, terms })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn terms(&self) -> &[(f64, PureState)] {
        &self.terms
    }

    pub fn density(&self) -> BipartiteOperator {
        let d = self.dims.total();
        let mut rho = ComplexMatrix::zeros(d, d);
        for (w, v) in &self.terms {
            let a = v.amplitudes();
            rho += (a * a.adjoint()) * C64::new(*w, 0.0);
        }
        BipartiteOperator::new(rho, self.dims.m, self.dims.n).expect("dims")
    }
}

pub(crate) fn ensure_state(rho: &BipartiteOperator) -> Result<()> {
    ensure_hermitian(rho.matrix())?;
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > UNIT_TOL || tr.im.abs() > UNIT_TOL {
        return Err(Error::Precondition(format!("state has trace {tr}, expected 1")));
    }
    Ok(())
}

/// True when the ensemble reproduces `ρ` within the reconstruction tolerance,
/// which certifies `SN(ρ) ≤ ens.k()`.
pub fn sn_upper_verify(rho: &BipartiteOperator, ens: &SchmidtEnsemble) -> Result<bool> {
    ensure_state(rho)?;
    if rho.dims() != ens.dims() {
        return Err(Error::DimensionMismatch(format!(
            "state is {}⊗{}, ensemble is {}⊗{}",
            rho.m(),
            rho.n(),
            ens.dims().m,
            ens.dims().n
        )));
    }
    Ok(max_abs_diff(ens.density().matrix(), rho.matrix()) <= RECON_TOL)
}

#[derive(Debug, Clone)]
pub struct WitnessCertificate {
    pub witness: BipartiteOperator,
    pub k: usize,
    /// `Tr(W ρ)`.
    pub pairing: f64,
    pub block_pos_evidence: BlockPositivityVerdict,
    /// Positive evidence for `W` and a negative pairing: `SN(ρ) ≥ k + 1`,
    /// conditional on the heuristic block-positivity search.
    pub valid: bool,
}

/// Pairs a candidate k-witness with a state.
pub fn witness_check(
    w: &BipartiteOperator,
    rho: &BipartiteOperator,
    k: usize,
    cfg: &SeeSawConfig,
) -> Result<WitnessCertificate> {
    ensure_hermitian(w.matrix())?;
    ensure_state(rho)?;
    if w.dims() != rho.dims() {
        return Err(Error::DimensionMismatch("witness and state dimensions differ".into()));
    }
    let min_eig = crate::linalg::min_eig_hermitian(rho.matrix())?;
    if min_eig < -RECON_TOL {
        return Err(Error::NotPositive { min_eig });
    }
    let evidence = k_block_positivity(w, k, cfg)?;
    let pairing = trace_product_re(w.matrix(), rho.matrix());
    let valid = evidence.status == BlockStatus::HeuristicallyPositive && pairing < -REFUTE_TOL;
    Ok(WitnessCertificate { witness: w.clone(), k, pairing, block_pos_evidence: evidence, valid })
}

/// `I − (n/k)|φ><φ|` on `C^n ⊗ C^n`: k-block positive, not (k+1)-block positive for `k < n`.
pub fn reduction_witness(n: usize, k: usize) -> Result<BipartiteOperator> {
    check_rank(k, n)?;
    let phi = PureState::maximally_entangled(n);
    let a = phi.amplitudes();
    let w = ComplexMatrix::identity(n * n, n * n) - (a * a.adjoint()) * C64::new(n as f64 / k as f64, 0.0);
    BipartiteOperator::new(w, n, n)
}

/// `F|φ><φ| + (1 − F)(I − |φ><φ|)/(n² − 1)`.
pub fn isotropic(f: f64, n: usize) -> Result<BipartiteOperator> {
    if !(0.0..=1.0).contains(&f) {
        return Err(Error::Precondition(format!("fidelity {f} outside [0, 1]")));
    }
    if n < 2 {
        return Err(Error::Precondition("isotropic states need n ≥ 2".into()));
    }
    let phi = PureState::maximally_entangled(n);
    let a = phi.amplitudes();
    let p = a * a.adjoint();
    let d = n * n;
    let rest = (ComplexMatrix::identity(d, d) - &p) * C64::new((1.0 - f) / (d as f64 - 1.0), 0.0);
    BipartiteOperator::new(p * C64::new(f, 0.0) + rest, n, n)
}

/// Frame compression reused by callers that hold a verdict frame.
pub fn compression_min(x: &BipartiteOperator, f: &Frame) -> Result<f64> {
    let c = crate::norms::compress(x, f)?;
    crate::linalg::min_eig_hermitian(&c)
}
