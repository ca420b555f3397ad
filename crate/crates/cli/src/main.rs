//! `schmidt-norms` command-line tool.
//!
//! Every command prints one JSON report on stdout and a one-line summary on
//! stderr. Exit status: 0 computed, 2 violation certificate produced
//! (refuted / detected), 1 input error.

mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use schmidt_norms::cones::{self, isotropic, reduction_witness, SchmidtEnsemble};
use schmidt_norms::fixtures;
use schmidt_norms::io::{self, MatrixFile, VectorFile};
use schmidt_norms::linalg::{trace_product_re, PureState};
use schmidt_norms::maps::{self, ContractionBound};
use schmidt_norms::norms::{self, SeeSawConfig};
use schmidt_norms::oracle::{self, OracleConfig};
use schmidt_norms::{BipartiteOperator, ComplexVector, MapRepr, RandomConfig};

use report::{map_norm_json, norm_json, operator_json, verdict_json, Report};

#[derive(Parser)]
#[command(name = "schmidt-norms", version, about = "Schmidt-rank-constrained norms and Schmidt-number certificates")]
struct Cli {
    /// Cap on worker threads (default: one per core)
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    group: Group,
}

#[derive(Args, Clone, Copy)]
struct Solver {
    /// Schmidt-rank bound
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long, env = "SCHMIDT_NORMS_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 20)]
    restarts: usize,
    #[arg(long, default_value_t = 200)]
    max_iters: usize,
    /// Objective tolerance for stopping a restart
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

impl Solver {
    fn config(&self) -> SeeSawConfig {
        SeeSawConfig {
            restarts: self.restarts,
            max_iters: self.max_iters,
            obj_tol: self.tol,
            rng: RandomConfig::new(self.seed),
        }
    }

    fn record(&self, r: &mut Report) {
        r.param("k", self.k);
        r.param("seed", self.seed);
        r.param("restarts", self.restarts);
        r.param("max_iters", self.max_iters);
        r.param("tol", self.tol);
    }
}

#[derive(Args, Clone, Copy)]
struct Sampling {
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long, env = "SCHMIDT_NORMS_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 20000)]
    samples: usize,
    #[arg(long, default_value_t = 200)]
    polish: usize,
}

impl Sampling {
    fn config(&self) -> OracleConfig {
        OracleConfig { samples: self.samples, polish_steps: self.polish, rng: RandomConfig::new(self.seed) }
    }

    fn record(&self, r: &mut Report) {
        r.param("k", self.k);
        r.param("seed", self.seed);
        r.param("samples", self.samples);
        r.param("polish", self.polish);
    }
}

#[derive(Subcommand)]
enum Group {
    /// Schmidt-rank-constrained operator norms
    #[command(subcommand)]
    Norm(NormCmd),
    /// Block positivity and Schmidt-number certificates
    #[command(subcommand)]
    Cone(ConeCmd),
    /// Linear maps given by Choi matrices
    #[command(subcommand)]
    Map(MapCmd),
    /// Brute-force cross-checks and witness re-evaluation
    #[command(subcommand)]
    Oracle(OracleCmd),
    /// Built-in operators, maps and states
    #[command(subcommand)]
    Fixtures(FixturesCmd),
}

#[derive(Subcommand)]
enum NormCmd {
    /// sup |<v|X|w>| over SR(v), SR(w) <= k
    Sk {
        file: PathBuf,
        #[command(flatten)]
        s: Solver,
    },
    /// matrix-order norm: pairs sharing right Schmidt vectors
    Omin {
        file: PathBuf,
        #[command(flatten)]
        s: Solver,
    },
    /// minimal order norm sup |<v|X|v>|
    Minorder {
        file: PathBuf,
        #[command(flatten)]
        s: Solver,
    },
    /// bounds on the k-maximal operator space norm
    Maxspace {
        file: PathBuf,
        #[command(flatten)]
        s: Solver,
    },
}

#[derive(Subcommand)]
enum ConeCmd {
    /// search for a SR <= k vector with negative expectation
    Blockpos {
        file: PathBuf,
        #[command(flatten)]
        s: Solver,
    },
    /// pair a k-witness with a state
    Witness {
        #[arg(long)]
        witness: PathBuf,
        #[arg(long)]
        state: PathBuf,
        #[command(flatten)]
        s: Solver,
    },
    /// check a Schmidt ensemble against a state
    VerifySn {
        #[arg(long)]
        state: PathBuf,
        #[arg(long)]
        ensemble: PathBuf,
    },
}

#[derive(Subcommand)]
enum MapCmd {
    /// k-positivity via the Choi matrix
    Kpos {
        file: PathBuf,
        #[command(flatten)]
        s: Solver,
    },
    /// certify (with --ensemble) or refute k-partial entanglement breaking
    Kpeb {
        file: PathBuf,
        #[arg(long)]
        ensemble: Option<PathBuf>,
        #[arg(long)]
        witness: Option<PathBuf>,
        #[command(flatten)]
        s: Solver,
    },
    /// lower bound on ‖id_k ⊗ Φ‖
    IdkNorm {
        file: PathBuf,
        #[command(flatten)]
        s: Solver,
    },
    /// lower bound on ‖id_k ⊗ Φ‖_tr^H
    TrnormH {
        file: PathBuf,
        #[command(flatten)]
        s: Solver,
    },
    /// contraction test with the detection map built from --map
    Detect {
        #[arg(long)]
        state: PathBuf,
        #[arg(long)]
        map: PathBuf,
        /// use --map as given instead of building the detection map
        #[arg(long)]
        raw: bool,
        #[command(flatten)]
        s: Solver,
    },
}

#[derive(Subcommand)]
enum OracleCmd {
    Sk {
        file: PathBuf,
        #[command(flatten)]
        s: Sampling,
    },
    Blockmin {
        file: PathBuf,
        #[command(flatten)]
        s: Sampling,
    },
    Minorder {
        file: PathBuf,
        #[command(flatten)]
        s: Sampling,
    },
    Omin {
        file: PathBuf,
        #[command(flatten)]
        s: Sampling,
    },
    IdkNorm {
        file: PathBuf,
        #[command(flatten)]
        s: Sampling,
    },
    /// <v|X|w> for a vector file or a report's witness
    Expect {
        file: PathBuf,
        #[arg(long)]
        vector: PathBuf,
        /// right vector (defaults to the left one, or the report's pair)
        #[arg(long)]
        right: Option<PathBuf>,
        /// evaluate on (id ⊗ Φ)(X) instead of X; a map file or a detect report
        #[arg(long)]
        map: Option<PathBuf>,
    },
    /// Tr(W ρ)
    Pairing {
        #[arg(long)]
        witness: PathBuf,
        #[arg(long)]
        state: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Fixture {
    Example51,
    Swap,
    Identity,
    MaxEntangled,
    Isotropic,
    ReductionWitness,
    BasisEnsemble,
    IdentityMap,
    TransposeMap,
    ReductionMap,
    DepolarizingMap,
}

#[derive(Subcommand)]
enum FixturesCmd {
    /// print a fixture file on stdout
    Emit {
        name: Fixture,
        #[arg(long, default_value_t = 3)]
        n: usize,
        /// left dimension (defaults to n)
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// isotropic fidelity
        #[arg(long, default_value_t = 0.9)]
        f: f64,
        /// reduction-map parameter
        #[arg(long, default_value_t = 0.5)]
        p: f64,
    },
}

/// Input problems: unreadable files, bad JSON, violated preconditions.
struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

type CmdResult = Result<Outcome, InputError>;

struct Outcome {
    report: Report,
    result: Value,
    violation: bool,
    summary: String,
}

fn read(path: &Path) -> Result<(Vec<u8>, Value), InputError> {
    let bytes = std::fs::read(path).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    let value = serde_json::from_slice(&bytes).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    Ok((bytes, value))
}

fn decode<T: serde::de::DeserializeOwned>(path: &Path, v: Value) -> Result<T, InputError> {
    io::from_value(v).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn load_operator(r: &mut Report, role: &str, path: &Path) -> Result<BipartiteOperator, InputError> {
    let (bytes, v) = read(path)?;
    r.input(role, path, &bytes);
    let f: MatrixFile = decode(path, v)?;
    f.to_operator().map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn load_map(r: &mut Report, role: &str, path: &Path) -> Result<MapRepr, InputError> {
    let (bytes, v) = read(path)?;
    r.input(role, path, &bytes);
    // a detect report carries the map it used
    let v = match v.pointer("/result/map") {
        Some(m) => m.clone(),
        None => v,
    };
    let f: MatrixFile = decode(path, v)?;
    f.to_map().map_err(|e| InputError(format!("{}: {e}", path.display())))
}

/// Left and optional right vector from a vector file or a report's witness.
fn load_vectors(r: &mut Report, role: &str, path: &Path) -> Result<(VectorFile, Option<VectorFile>), InputError> {
    let (bytes, v) = read(path)?;
    r.input(role, path, &bytes);
    let Some(w) = v.pointer("/result/witness").cloned() else {
        return Ok((decode(path, v)?, None));
    };
    if let Some(left) = w.get("left") {
        let right = w.get("right").cloned().map(|x| decode(path, x)).transpose()?;
        return Ok((decode(path, left.clone())?, right));
    }
    if let Some(vec) = w.get("vector") {
        return Ok((decode(path, vec.clone())?, None));
    }
    if w.is_null() {
        return Err(InputError(format!("{}: report has no witness", path.display())));
    }
    Ok((decode(path, w)?, None))
}

fn vector_for(f: &VectorFile, dims: (usize, usize)) -> Result<ComplexVector, InputError> {
    let v = f.to_vector()?;
    if v.len() != dims.0 * dims.1 {
        return Err(InputError(format!(
            "field `len` = {} does not match the operator dimension {}",
            v.len(),
            dims.0 * dims.1
        )));
    }
    Ok(v)
}

fn outcome(report: Report, result: Value, violation: bool, summary: String) -> CmdResult {
    Ok(Outcome { report, result, violation, summary })
}

fn run_norm(cmd: NormCmd) -> CmdResult {
    let (name, file, s) = match &cmd {
        NormCmd::Sk { file, s } => ("norm sk", file, s),
        NormCmd::Omin { file, s } => ("norm omin", file, s),
        NormCmd::Minorder { file, s } => ("norm minorder", file, s),
        NormCmd::Maxspace { file, s } => ("norm maxspace", file, s),
    };
    let mut r = Report::new(name);
    s.record(&mut r);
    let x = load_operator(&mut r, "operator", file)?;
    let cfg = s.config();
    let est = match cmd {
        NormCmd::Sk { .. } => norms::sk_norm(&x, s.k, &cfg)?,
        NormCmd::Omin { .. } => norms::omin_norm(&x, s.k, &cfg)?,
        NormCmd::Minorder { .. } => norms::min_order_norm(&x, s.k, &cfg)?,
        NormCmd::Maxspace { .. } => {
            let (lo, up) = norms::maxk_space_norm_bounds(&x, s.k, &cfg)?;
            let summary = format!("{name}: {:.9} <= norm <= {:.9}", lo.value, up.value);
            return outcome(r, json!({ "lower": norm_json(&lo), "upper": norm_json(&up) }), false, summary);
        }
    };
    let summary = format!("{name}: {:.9} ({:?})", est.value, est.direction);
    outcome(r, norm_json(&est), false, summary)
}

fn run_cone(cmd: ConeCmd) -> CmdResult {
    match cmd {
        ConeCmd::Blockpos { file, s } => {
            let mut r = Report::new("cone blockpos");
            s.record(&mut r);
            let x = load_operator(&mut r, "operator", &file)?;
            let v = cones::k_block_positivity(&x, s.k, &s.config())?;
            let summary = format!("cone blockpos: {:?}, min <v|X|v> = {:.9}", v.status, v.min_value);
            outcome(r, verdict_json(&v), v.is_refuted(), summary)
        }
        ConeCmd::Witness { witness, state, s } => {
            let mut r = Report::new("cone witness");
            s.record(&mut r);
            let w = load_operator(&mut r, "witness", &witness)?;
            let rho = load_operator(&mut r, "state", &state)?;
            let c = cones::witness_check(&w, &rho, s.k, &s.config())?;
            let result = json!({
                "k": c.k,
                "pairing": c.pairing,
                "valid": c.valid,
                "block_pos_evidence": verdict_json(&c.block_pos_evidence),
                "witness": operator_json(&c.witness),
            });
            let summary = format!("cone witness: Tr(Wρ) = {:.9}, certificate valid: {}", c.pairing, c.valid);
            outcome(r, result, c.valid, summary)
        }
        ConeCmd::VerifySn { state, ensemble } => {
            let mut r = Report::new("cone verify-sn");
            let rho = load_operator(&mut r, "state", &state)?;
            let (bytes, v) = read(&ensemble)?;
            r.input("ensemble", &ensemble, &bytes);
            let f: io::EnsembleFile = decode(&ensemble, v)?;
            let ens = f.to_ensemble()?;
            let ok = cones::sn_upper_verify(&rho, &ens)?;
            r.param("k", ens.k());
            let summary = format!("cone verify-sn: reconstruction {}", if ok { "verified" } else { "failed" });
            outcome(r, json!({ "verified": ok, "k": ens.k() }), false, summary)
        }
    }
}

fn run_map(cmd: MapCmd) -> CmdResult {
    match cmd {
        MapCmd::Kpos { file, s } => {
            let mut r = Report::new("map kpos");
            s.record(&mut r);
            let phi = load_map(&mut r, "map", &file)?;
            let v = maps::k_positivity(&phi, s.k, &s.config())?;
            let summary = format!("map kpos: {:?}, min Choi expectation {:.9}", v.status, v.min_value);
            outcome(r, verdict_json(&v), v.is_refuted(), summary)
        }
        MapCmd::Kpeb { file, ensemble, witness, s } => {
            let mut r = Report::new("map kpeb");
            s.record(&mut r);
            let phi = load_map(&mut r, "map", &file)?;
            if let Some(path) = ensemble {
                let (bytes, v) = read(&path)?;
                r.input("ensemble", &path, &bytes);
                let f: io::EnsembleFile = decode(&path, v)?;
                let ens: SchmidtEnsemble = f.to_ensemble()?;
                let ok = maps::k_peb_certify(&phi, &ens)?;
                let summary =
                    format!("map kpeb: {}-PEB certificate {}", ens.k(), if ok { "verified" } else { "failed" });
                return outcome(r, json!({ "certified": ok, "k": ens.k() }), false, summary);
            }
            let w = witness.map(|p| load_operator(&mut r, "witness", &p)).transpose()?;
            let c = maps::k_peb_refute(&phi, s.k, w.as_ref(), &s.config())?;
            let result = json!({
                "k": c.k,
                "pairing": c.pairing,
                "valid": c.valid,
                "block_pos_evidence": verdict_json(&c.block_pos_evidence),
                "witness": operator_json(&c.witness),
            });
            let summary = format!("map kpeb: pairing {:.9}, not {}-PEB: {}", c.pairing, s.k, c.valid);
            outcome(r, result, c.valid, summary)
        }
        MapCmd::IdkNorm { file, s } => {
            let mut r = Report::new("map idk-norm");
            s.record(&mut r);
            let phi = load_map(&mut r, "map", &file)?;
            let e = maps::idk_op_norm(&phi, s.k, &s.config())?;
            let summary = format!("map idk-norm: {:.9} ({:?})", e.value, e.direction);
            outcome(r, map_norm_json(&e), false, summary)
        }
        MapCmd::TrnormH { file, s } => {
            let mut r = Report::new("map trnorm-h");
            s.record(&mut r);
            let phi = load_map(&mut r, "map", &file)?;
            let e = maps::hermitian_trace_norm(&phi, s.k, &s.config())?;
            let summary = format!("map trnorm-h: {:.9} ({:?})", e.value, e.direction);
            outcome(r, map_norm_json(&e), false, summary)
        }
        MapCmd::Detect { state, map, raw, s } => {
            let mut r = Report::new("map detect");
            s.record(&mut r);
            r.param("raw", raw);
            let rho = load_operator(&mut r, "state", &state)?;
            let psi = load_map(&mut r, "map", &map)?;
            let cfg = s.config();
            let phi = if raw { psi } else { maps::detection_map(&psi, &cfg)? };
            let out = maps::sn_contraction_test(&rho, &phi, s.k, ContractionBound::Computed(cfg.fork(1)))?;
            let witness =
                VectorFile { m: Some(rho.m()), n: Some(phi.out_dim()), ..VectorFile::from_vector(&out.witness) };
            let result = json!({
                "detected": out.detected,
                "trace_norm": out.trace_norm,
                "map_norm": out.map_norm,
                "min_eigenvalue": out.min_eigenvalue,
                "witness": witness,
                "map": MatrixFile::from_map(&phi),
            });
            let summary = format!(
                "map detect: trace norm {:.9}, SN > {} {}",
                out.trace_norm,
                s.k,
                if out.detected { "detected" } else { "not detected" }
            );
            outcome(r, result, out.detected, summary)
        }
    }
}

fn run_oracle(cmd: OracleCmd) -> CmdResult {
    match cmd {
        OracleCmd::Expect { file, vector, right, map } => {
            let mut r = Report::new("oracle expect");
            let x = load_operator(&mut r, "operator", &file)?;
            let x = match map {
                Some(path) => {
                    let phi = load_map(&mut r, "map", &path)?;
                    if phi.in_dim() != x.n() {
                        return Err(InputError(format!(
                            "map input dimension {} does not match operator field `n` = {}",
                            phi.in_dim(),
                            x.n()
                        )));
                    }
                    let out = phi.apply_idk(x.m(), x.matrix())?;
                    BipartiteOperator::new(out, x.m(), phi.out_dim())?
                }
                None => x,
            };
            let dims = (x.m(), x.n());
            let (left, pair) = load_vectors(&mut r, "vector", &vector)?;
            let right = match right {
                Some(path) => Some(load_vectors(&mut r, "right", &path)?.0),
                None => pair,
            };
            let v = vector_for(&left, dims)?;
            let w = match &right {
                Some(f) => vector_for(f, dims)?,
                None => v.clone(),
            };
            let s = oracle::sandwich_value(&x, &v, &w)?;
            let summary = format!("oracle expect: <v|X|w> = {:.9} {:+.9}i", s.re, s.im);
            outcome(r, json!({ "re": s.re, "im": s.im, "abs": s.norm() }), false, summary)
        }
        OracleCmd::Pairing { witness, state } => {
            let mut r = Report::new("oracle pairing");
            let w = load_operator(&mut r, "witness", &witness)?;
            let rho = load_operator(&mut r, "state", &state)?;
            if w.dims() != rho.dims() {
                return Err(InputError("witness and state dimensions differ".into()));
            }
            let t = trace_product_re(w.matrix(), rho.matrix());
            outcome(r, json!({ "pairing": t }), false, format!("oracle pairing: Tr(Wρ) = {t:.9}"))
        }
        OracleCmd::IdkNorm { file, s } => {
            let mut r = Report::new("oracle idk-norm");
            s.record(&mut r);
            let phi = load_map(&mut r, "map", &file)?;
            let value = oracle::brute_idk_norm(&phi, s.k, &s.config())?;
            outcome(r, json!({ "value": value, "direction": "lower" }), false, format!("oracle idk-norm: {value:.9}"))
        }
        OracleCmd::Sk { file, s } => run_sampled("oracle sk", oracle::brute_sk_norm, &file, s),
        OracleCmd::Blockmin { file, s } => run_sampled("oracle blockmin", oracle::brute_block_min, &file, s),
        OracleCmd::Minorder { file, s } => run_sampled("oracle minorder", oracle::brute_min_order_norm, &file, s),
        OracleCmd::Omin { file, s } => run_sampled("oracle omin", oracle::brute_omin_norm, &file, s),
    }
}

type Brute = fn(&BipartiteOperator, usize, &OracleConfig) -> schmidt_norms::Result<f64>;

fn run_sampled(name: &str, f: Brute, file: &Path, s: Sampling) -> CmdResult {
    let mut r = Report::new(name);
    s.record(&mut r);
    let x = load_operator(&mut r, "operator", file)?;
    let value = f(&x, s.k, &s.config())?;
    let direction = if name == "oracle blockmin" { "upper" } else { "lower" };
    outcome(r, json!({ "value": value, "direction": direction }), false, format!("{name}: {value:.9}"))
}

fn emit(cmd: FixturesCmd) -> Result<String, InputError> {
    let FixturesCmd::Emit { name, n, m, k, f, p } = cmd;
    let m = m.unwrap_or(n);
    let op = |x: BipartiteOperator| Ok::<_, InputError>(io::operator_json(&x));
    let map = |phi: MapRepr| Ok::<_, InputError>(io::map_json(&phi));
    match name {
        Fixture::Example51 => op(fixtures::example51(n)),
        Fixture::Swap => op(fixtures::swap(n)),
        Fixture::Identity => op(BipartiteOperator::identity(m, n)),
        Fixture::MaxEntangled => op(fixtures::max_entangled_projector(n)),
        Fixture::Isotropic => op(isotropic(f, n)?),
        Fixture::ReductionWitness => op(reduction_witness(n, k)?),
        Fixture::BasisEnsemble => {
            // product basis states with equal weights: the maximally mixed state
            let w = 1.0 / (m * n) as f64;
            let terms = (0..m).flat_map(|i| (0..n).map(move |j| (w, PureState::basis(m, n, i, j)))).collect();
            let ens = SchmidtEnsemble::new(k, terms)?;
            Ok(serde_json::to_string_pretty(&io::EnsembleFile::from_ensemble(&ens))?)
        }
        Fixture::IdentityMap => map(MapRepr::identity(n)),
        Fixture::TransposeMap => map(MapRepr::transpose(n)),
        Fixture::ReductionMap => map(MapRepr::reduction(n, p)),
        Fixture::DepolarizingMap => map(MapRepr::depolarizing(n)),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    if let Some(t) = cli.threads {
        #[cfg(feature = "parallel")]
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: --threads: {e}");
            return ExitCode::from(1);
        }
        #[cfg(not(feature = "parallel"))]
        let _ = t;
    }

    let started = Instant::now();
    let out = match cli.group {
        Group::Norm(c) => run_norm(c),
        Group::Cone(c) => run_cone(c),
        Group::Map(c) => run_map(c),
        Group::Oracle(c) => run_oracle(c),
        Group::Fixtures(c) => {
            return match emit(c) {
                Ok(text) => {
                    println!("{text}");
                    ExitCode::SUCCESS
                }
                Err(InputError(msg)) => {
                    eprintln!("error: {msg}");
                    ExitCode::from(1)
                }
            };
        }
    };
    match out {
        Ok(o) => {
            println!("{}", o.report.render(o.result, started.elapsed().as_millis()));
            eprintln!("{}", o.summary);
            if o.violation {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(InputError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
