//! Brute-force estimators for cross-checking the optimizers on small dimensions.
//!
//! Vectors with `SR ≤ k` are sampled in factored form `Σ_{r<k} a_r ⊗ b_r` and
//! the best samples are polished by line-searched gradient steps on the
//! factors. Nothing here calls into `norms`, `cones` or `maps` optimizers.
//!
//! Sampling runs in blocks of [`BLOCK`] draws. A draw is polished when its raw
//! value beats every earlier draw in its block, so the set of polished draws
//! among the first `N` does not depend on the total budget and the running
//! maximum is nondecreasing in the sample count.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    ensure_hermitian, hermitian_eigen, operator_norm, random_gaussian_matrix, random_unitary, top_singular_triple,
    BipartiteOperator, ComplexMatrix, ComplexVector, C64,
};
use crate::maps::MapRepr;
use crate::parallel::map_indexed;
use crate::rng::RandomConfig;

pub const BLOCK: usize = 500;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleConfig {
    pub samples: usize,
    pub polish_steps: usize,
    pub rng: RandomConfig,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self { samples: 20000, polish_steps: 200, rng: RandomConfig::default() }
    }
}

impl OracleConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self { rng: RandomConfig::new(seed), ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::InvalidConfig("samples must be at least 1".into()));
        }
        Ok(())
    }
}

/// Best value and the running maximum after each sample.
#[derive(Debug, Clone)]
pub struct OracleTrace {
    pub value: f64,
    pub running_max: Vec<f64>,
}

/// A supremum the oracle can sample.
#[derive(Debug, Clone)]
pub enum Problem<'a> {
    /// `|<v|X|w>|`, `SR(v), SR(w) ≤ k`.
    SkNorm { x: &'a BipartiteOperator, k: usize },
    /// `-<v|X|v>`, `SR(v) ≤ k`.
    NegBlockMin { x: &'a BipartiteOperator, k: usize },
    /// `|<v|X|v>|`, `SR(v) ≤ k`.
    MinOrder { x: &'a BipartiteOperator, k: usize },
    /// `|<v|X|w>|` with `v`, `w` sharing right Schmidt vectors.
    Omin { x: &'a BipartiteOperator, k: usize },
    /// `‖(id_m ⊗ Φ*)(|v><v|)‖_tr` with `v ∈ C^m ⊗ C^n_out`, `SR(v) ≤ k`.
    Sandwich { phi: &'a MapRepr, k: usize, m: usize },
    /// `‖(id_k ⊗ Φ)(U)‖` over unitaries `U`.
    IdkNorm { phi: &'a MapRepr, k: usize },
}

// ---------------------------------------------------------------------------
// independent Choi contractions

/// `(id_k ⊗ Φ)(Y)` entrywise from the Choi matrix.
fn choi_idk(j: &ComplexMatrix, r: usize, n: usize, k: usize, y: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix::from_fn(k * n, k * n, |row, col| {
        let (a, p) = (row / n, row % n);
        let (b, q) = (col / n, col % n);
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..r {
            for jj in 0..r {
                acc += y[(a * r + i, b * r + jj)] * j[(i * n + p, jj * n + q)];
            }
        }
        acc
    })
}

/// `(id_k ⊗ Φ*)(Y)` for `Y ∈ M_k ⊗ M_n`.
fn choi_idk_adjoint(j: &ComplexMatrix, r: usize, n: usize, k: usize, y: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix::from_fn(k * r, k * r, |row, col| {
        let (a, i) = (row / r, row % r);
        let (b, jj) = (col / r, col % r);
        let mut acc = C64::new(0.0, 0.0);
        for p in 0..n {
            for q in 0..n {
                acc += y[(a * n + p, b * n + q)] * j[(i * n + p, jj * n + q)].conj();
            }
        }
        acc
    })
}

fn sign_matrix(h: &ComplexMatrix) -> (f64, ComplexMatrix) {
    let (vals, vecs) = hermitian_eigen(h);
    let d = h.nrows();
    let mut s = ComplexMatrix::zeros(d, d);
    let mut tn = 0.0;
    for (i, &l) in vals.iter().enumerate() {
        tn += l.abs();
        let e = vecs.column(i);
        s += (e * e.adjoint()) * C64::new(l.signum(), 0.0);
    }
    (tn, s)
}

fn herm(x: &ComplexMatrix) -> ComplexMatrix {
    (x + x.adjoint()) * C64::new(0.5, 0.0)
}

// ---------------------------------------------------------------------------
// factored vectors

/// Factor matrices and which `(left, right)` pair forms each vector.
#[derive(Clone)]
struct Factors {
    blocks: Vec<ComplexMatrix>,
}

struct Layout {
    m: usize,
    n: usize,
    k: usize,
    /// `(left block, right block)` per vector.
    pairs: Vec<(usize, usize)>,
    blocks: usize,
}

impl Layout {
    fn vectors(&self, f: &Factors) -> Vec<ComplexVector> {
        self.pairs
            .iter()
            .map(|&(a, b)| {
                let mat = &f.blocks[a] * f.blocks[b].transpose();
                ComplexVector::from_fn(self.m * self.n, |idx, _| mat[(idx / self.n, idx % self.n)])
            })
            .collect()
    }

    fn random(&self, rng: &mut rand_chacha::ChaCha8Rng) -> Factors {
        let blocks = (0..self.blocks)
            .map(|b| {
                let rows = if self.is_left(b) { self.m } else { self.n };
                random_gaussian_matrix(rows, self.k, rng)
            })
            .collect();
        Factors { blocks }
    }

    fn is_left(&self, b: usize) -> bool {
        self.pairs.iter().any(|&(a, _)| a == b)
    }
}

trait VectorObjective {
    /// Value and ascent direction at unit vectors.
    fn eval(&self, v: &[ComplexVector]) -> (f64, Vec<ComplexVector>);
}

/// Value, unit vectors, ascent directions and raw norms.
type Evaluated = (f64, Vec<ComplexVector>, Vec<ComplexVector>, Vec<f64>);

fn evaluate(layout: &Layout, obj: &dyn VectorObjective, f: &Factors) -> Option<Evaluated> {
    let raw = layout.vectors(f);
    let norms: Vec<f64> = raw.iter().map(|v| v.norm()).collect();
    if norms.iter().any(|&x| x.is_nan() || x <= 1e-300) {
        return None;
    }
    let unit: Vec<ComplexVector> = raw.iter().zip(&norms).map(|(v, &s)| v / C64::new(s, 0.0)).collect();
    let (value, grads) = obj.eval(&unit);
    Some((value, unit, grads, norms))
}

fn factor_gradient(
    layout: &Layout,
    f: &Factors,
    unit: &[ComplexVector],
    grads: &[ComplexVector],
    norms: &[f64],
) -> Vec<ComplexMatrix> {
    let mut out: Vec<ComplexMatrix> = f.blocks.iter().map(|b| ComplexMatrix::zeros(b.nrows(), b.ncols())).collect();
    for (t, &(a, b)) in layout.pairs.iter().enumerate() {
        let g = &grads[t];
        let u = &unit[t];
        let radial = u.dotc(g).re;
        let proj = (g - u * C64::new(radial, 0.0)) / C64::new(norms[t], 0.0);
        let gm = ComplexMatrix::from_fn(layout.m, layout.n, |i, j| proj[i * layout.n + j]);
        out[a] += &gm * f.blocks[b].map(|z| z.conj());
        out[b] += gm.transpose() * f.blocks[a].map(|z| z.conj());
    }
    out
}

fn polish(layout: &Layout, obj: &dyn VectorObjective, start: Factors, steps: usize) -> f64 {
    let Some((mut value, mut unit, mut grads, mut norms)) = evaluate(layout, obj, &start) else {
        return f64::NEG_INFINITY;
    };
    let mut f = start;
    let mut eta = 0.5;
    for _ in 0..steps {
        let g = factor_gradient(layout, &f, &unit, &grads, &norms);
        let cand = Factors { blocks: f.blocks.iter().zip(&g).map(|(b, d)| b + d * C64::new(eta, 0.0)).collect() };
        match evaluate(layout, obj, &cand) {
            Some((v, u, gr, nr)) if v > value => {
                value = v;
                unit = u;
                grads = gr;
                norms = nr;
                // keep factors well scaled
                let scale = norms.iter().copied().fold(0.0, f64::max);
                f = cand;
                if !(1e-3..=1e3).contains(&scale) {
                    for b in f.blocks.iter_mut() {
                        *b /= C64::new(scale.sqrt(), 0.0);
                    }
                    norms.iter_mut().for_each(|x| *x /= scale);
                }
                eta *= 1.5;
            }
            _ => {
                eta *= 0.5;
                if eta < 1e-14 {
                    break;
                }
            }
        }
    }
    value
}

struct Bilinear<'a> {
    x: &'a ComplexMatrix,
    xa: ComplexMatrix,
}

impl VectorObjective for Bilinear<'_> {
    fn eval(&self, v: &[ComplexVector]) -> (f64, Vec<ComplexVector>) {
        let xw = self.x * &v[1];
        let s = v[0].dotc(&xw);
        let a = s.norm().max(1e-300);
        let gv = &xw * (s.conj() / a);
        let gw = (&self.xa * &v[0]) * (s.conj() / a);
        (s.norm(), vec![gv, gw])
    }
}

struct NegExpectation<'a> {
    x: &'a ComplexMatrix,
}

impl VectorObjective for NegExpectation<'_> {
    fn eval(&self, v: &[ComplexVector]) -> (f64, Vec<ComplexVector>) {
        let xv = self.x * &v[0];
        (-v[0].dotc(&xv).re, vec![-xv])
    }
}

struct AbsExpectation<'a> {
    x: &'a ComplexMatrix,
    xa: ComplexMatrix,
}

impl VectorObjective for AbsExpectation<'_> {
    fn eval(&self, v: &[ComplexVector]) -> (f64, Vec<ComplexVector>) {
        let xv = self.x * &v[0];
        let s = v[0].dotc(&xv);
        let a = s.norm().max(1e-300);
        let g = (&xv * s.conj() + (&self.xa * &v[0]) * s) / C64::new(a, 0.0);
        (s.norm(), vec![g])
    }
}

struct SandwichTrace<'a> {
    j: &'a ComplexMatrix,
    r: usize,
    n: usize,
    m: usize,
}

impl VectorObjective for SandwichTrace<'_> {
    fn eval(&self, v: &[ComplexVector]) -> (f64, Vec<ComplexVector>) {
        let p = &v[0] * v[0].adjoint();
        let out = herm(&choi_idk_adjoint(self.j, self.r, self.n, self.m, &p));
        let (tn, s) = sign_matrix(&out);
        let back = choi_idk(self.j, self.r, self.n, self.m, &s);
        (tn, vec![herm(&back) * &v[0]])
    }
}

fn sample_factored(layout: &Layout, obj: &(dyn VectorObjective + Sync), cfg: &OracleConfig) -> OracleTrace {
    let blocks = cfg.samples.div_ceil(BLOCK);
    let per_block = map_indexed(blocks, |b| {
        let end = ((b + 1) * BLOCK).min(cfg.samples);
        let mut record = f64::NEG_INFINITY;
        let mut vals = Vec::with_capacity(end - b * BLOCK);
        for i in b * BLOCK..end {
            let mut rng = cfg.rng.fork(i as u64).rng();
            let f = layout.random(&mut rng);
            let raw = evaluate(layout, obj, &f).map(|e| e.0).unwrap_or(f64::NEG_INFINITY);
            let mut val = raw;
            if raw > record {
                record = raw;
                val = val.max(polish(layout, obj, f, cfg.polish_steps));
            }
            vals.push(val);
        }
        vals
    });
    running(per_block.into_iter().flatten())
}

fn running(vals: impl Iterator<Item = f64>) -> OracleTrace {
    let mut best = f64::NEG_INFINITY;
    let running_max: Vec<f64> = vals
        .map(|v| {
            best = best.max(v);
            best
        })
        .collect();
    OracleTrace { value: best, running_max }
}

// ---------------------------------------------------------------------------
// unitary sampling for ‖id_k ⊗ Φ‖

fn cayley(a: &ComplexMatrix, eta: f64) -> ComplexMatrix {
    let d = a.nrows();
    let id = ComplexMatrix::identity(d, d);
    let half = a * C64::new(eta / 2.0, 0.0);
    let lhs = &id - &half;
    let rhs = &id + &half;
    lhs.lu().solve(&rhs).unwrap_or(id)
}

fn idk_value(j: &ComplexMatrix, r: usize, n: usize, k: usize, u: &ComplexMatrix) -> f64 {
    operator_norm(&choi_idk(j, r, n, k, u))
}

fn polish_unitary(j: &ComplexMatrix, r: usize, n: usize, k: usize, start: ComplexMatrix, steps: usize) -> f64 {
    let mut u = start;
    let mut value = idk_value(j, r, n, k, &u);
    let mut eta = 0.5;
    for _ in 0..steps {
        let (_, v, w) = top_singular_triple(&choi_idk(j, r, n, k, &u));
        let g = choi_idk_adjoint(j, r, n, k, &(&v * w.adjoint()));
        let ug = u.adjoint() * &g;
        let skew = (&ug - ug.adjoint()) * C64::new(0.5, 0.0);
        if skew.norm() < 1e-15 {
            break;
        }
        let cand = &u * cayley(&skew, eta);
        let cv = idk_value(j, r, n, k, &cand);
        if cv > value {
            value = cv;
            u = cand;
            eta *= 1.5;
        } else {
            eta *= 0.5;
            if eta < 1e-14 {
                break;
            }
        }
    }
    value
}

fn sample_unitaries(phi: &MapRepr, k: usize, cfg: &OracleConfig) -> OracleTrace {
    let (r, n) = (phi.in_dim(), phi.out_dim());
    let j = phi.choi().matrix();
    let blocks = cfg.samples.div_ceil(BLOCK);
    let per_block = map_indexed(blocks, |b| {
        let end = ((b + 1) * BLOCK).min(cfg.samples);
        let mut record = f64::NEG_INFINITY;
        let mut vals = Vec::with_capacity(end - b * BLOCK);
        for i in b * BLOCK..end {
            let mut rng = cfg.rng.fork(i as u64).rng();
            let u = random_unitary(k * r, &mut rng);
            let raw = idk_value(j, r, n, k, &u);
            let mut val = raw;
            if raw > record {
                record = raw;
                val = val.max(polish_unitary(j, r, n, k, u, cfg.polish_steps));
            }
            vals.push(val);
        }
        vals
    });
    running(per_block.into_iter().flatten())
}

// ---------------------------------------------------------------------------
// entry points

fn check_k(k: usize, max: usize) -> Result<()> {
    if k == 0 || k > max {
        return Err(Error::RankOutOfRange { k, max });
    }
    Ok(())
}

/// Samples one supremum and records the running maximum.
pub fn sample(problem: &Problem<'_>, cfg: &OracleConfig) -> Result<OracleTrace> {
    cfg.validate()?;
    let one = |x: &BipartiteOperator, k: usize| Layout { m: x.m(), n: x.n(), k, pairs: vec![(0, 1)], blocks: 2 };
    Ok(match *problem {
        Problem::SkNorm { x, k } => {
            check_k(k, x.dims().min())?;
            let layout = Layout { m: x.m(), n: x.n(), k, pairs: vec![(0, 1), (2, 3)], blocks: 4 };
            let obj = Bilinear { x: x.matrix(), xa: x.matrix().adjoint() };
            sample_factored(&layout, &obj, cfg)
        }
        Problem::NegBlockMin { x, k } => {
            ensure_hermitian(x.matrix())?;
            check_k(k, x.dims().min())?;
            sample_factored(&one(x, k), &NegExpectation { x: x.matrix() }, cfg)
        }
        Problem::MinOrder { x, k } => {
            check_k(k, x.dims().min())?;
            let obj = AbsExpectation { x: x.matrix(), xa: x.matrix().adjoint() };
            sample_factored(&one(x, k), &obj, cfg)
        }
        Problem::Omin { x, k } => {
            check_k(k, x.n())?;
            let layout = Layout { m: x.m(), n: x.n(), k, pairs: vec![(0, 1), (2, 1)], blocks: 3 };
            let obj = Bilinear { x: x.matrix(), xa: x.matrix().adjoint() };
            sample_factored(&layout, &obj, cfg)
        }
        Problem::Sandwich { phi, k, m } => {
            ensure_hermitian(phi.choi().matrix())?;
            let n = phi.out_dim();
            check_k(k, m.min(n))?;
            let layout = Layout { m, n, k, pairs: vec![(0, 1)], blocks: 2 };
            let obj = SandwichTrace { j: phi.choi().matrix(), r: phi.in_dim(), n, m };
            sample_factored(&layout, &obj, cfg)
        }
        Problem::IdkNorm { phi, k } => {
            if k == 0 {
                return Err(Error::RankOutOfRange { k, max: usize::MAX });
            }
            sample_unitaries(phi, k, cfg)
        }
    })
}

/// Lower bound on `sup |<v|X|w>|` over `SR(v), SR(w) ≤ k`.
pub fn brute_sk_norm(x: &BipartiteOperator, k: usize, cfg: &OracleConfig) -> Result<f64> {
    Ok(sample(&Problem::SkNorm { x, k }, cfg)?.value)
}

/// Upper bound on `min <v|X|v>` over `SR(v) ≤ k`.
pub fn brute_block_min(x: &BipartiteOperator, k: usize, cfg: &OracleConfig) -> Result<f64> {
    Ok(-sample(&Problem::NegBlockMin { x, k }, cfg)?.value)
}

/// Lower bound on `‖id_k ⊗ Φ‖` from unitary inputs.
pub fn brute_idk_norm(phi: &MapRepr, k: usize, cfg: &OracleConfig) -> Result<f64> {
    Ok(sample(&Problem::IdkNorm { phi, k }, cfg)?.value)
}

/// Lower bound on `sup |<v|X|v>|` over `SR(v) ≤ k`.
pub fn brute_min_order_norm(x: &BipartiteOperator, k: usize, cfg: &OracleConfig) -> Result<f64> {
    Ok(sample(&Problem::MinOrder { x, k }, cfg)?.value)
}

/// Lower bound on `sup |<v|X|w>|` over pairs sharing `k` right Schmidt vectors.
pub fn brute_omin_norm(x: &BipartiteOperator, k: usize, cfg: &OracleConfig) -> Result<f64> {
    Ok(sample(&Problem::Omin { x, k }, cfg)?.value)
}

/// Lower bound on `sup{|<v|(id_m ⊗ Φ)(X)|v>| : ‖X‖ ≤ 1, X = X*, SR(v) ≤ k}`.
pub fn brute_stabilized_sandwich(phi: &MapRepr, k: usize, m: usize, cfg: &OracleConfig) -> Result<f64> {
    Ok(sample(&Problem::Sandwich { phi, k, m }, cfg)?.value)
}

/// `<v|X|w>` by direct summation.
pub fn sandwich_value(x: &BipartiteOperator, v: &ComplexVector, w: &ComplexVector) -> Result<C64> {
    let d = x.dims().total();
    if v.len() != d || w.len() != d {
        return Err(Error::DimensionMismatch(format!("vectors must have length {d}")));
    }
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..d {
        for j in 0..d {
            acc += v[i].conj() * x.matrix()[(i, j)] * w[j];
        }
    }
    Ok(acc)
}
