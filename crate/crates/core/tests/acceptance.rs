//! Acceptance suite. Each criterion is one test and prints one PASS/FAIL line.

use std::time::Instant;

use schmidt_norms::cones::{
    isotropic, k_block_positivity, reduction_witness, witness_check, BlockStatus, SchmidtEnsemble,
};
use schmidt_norms::fixtures::{example51, max_entangled_projector, swap};
use schmidt_norms::linalg::{
    hermitian_part, operator_norm, random_gaussian_matrix, random_sr_k_vector, random_unitary, tensor, trace_product_re,
};
use schmidt_norms::maps::{
    detection_map, hermitian_trace_norm, idk_hermitian_sandwich_norm, idk_op_norm, k_positivity, sn_contraction_test,
    ContractionBound,
};
use schmidt_norms::norms::{dec_norm_best, max_order_norm_upper, min_order_norm, omin_norm, sk_norm, SeeSawConfig};
use schmidt_norms::oracle::{self, OracleConfig};
use schmidt_norms::{BipartiteOperator, Dims, MapRepr, RandomConfig, C64};

struct Report {
    id: u32,
    failures: Vec<String>,
    checks: usize,
}

impl Report {
    fn new(id: u32) -> Self {
        Self { id, failures: Vec::new(), checks: 0 }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn finish(self, title: &str) {
        let status = if self.failures.is_empty() { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {status}: {title} ({} checks, {} failed)", self.id, self.checks, self.failures.len());
        for f in &self.failures {
            println!("    {f}");
        }
        assert!(self.failures.is_empty(), "criterion {} failed", self.id);
    }
}

fn cfg(seed: u64) -> SeeSawConfig {
    SeeSawConfig::with_seed(seed)
}

fn random_op(m: usize, n: usize, rng: &mut rand_chacha::ChaCha8Rng) -> BipartiteOperator {
    BipartiteOperator::new(random_gaussian_matrix(m * n, m * n, rng), m, n).unwrap()
}

fn transpose_cases() -> Vec<(usize, f64)> {
    (1..=3).map(|k| (k, idk_op_norm(&MapRepr::transpose(3), k, &cfg(7)).unwrap().value)).collect()
}

#[test]
fn criterion_01_example_regression() {
    let mut r = Report::new(1);
    let start = Instant::now();
    let x = example51(3);
    for k in 1..=3 {
        let mo = min_order_norm(&x, k, &cfg(11)).unwrap().value;
        let want = k as f64 / 6.0;
        r.check((mo - want).abs() <= 1e-6, || format!("k = {k}: minimal order norm {mo:.9}, expected {want:.9}"));
        let om = omin_norm(&x, k, &cfg(12)).unwrap().value;
        let floor = k as f64 / 3.0;
        r.check(om >= floor - 1e-6, || format!("k = {k}: matrix-order norm {om:.9} below {floor:.9}"));
    }
    let secs = start.elapsed().as_secs_f64();
    r.check(secs < 30.0, || format!("runtime {secs:.1} s"));
    r.finish("example operator: minimal order norm k/6, matrix-order norm >= k/3");
}

#[test]
fn criterion_02_sk_closed_forms() {
    let mut r = Report::new(2);
    let phi = max_entangled_projector(3);
    let ocfg = OracleConfig::with_seed(21);
    for k in 1..=3 {
        let v = sk_norm(&phi, k, &cfg(21)).unwrap().value;
        let want = k as f64 / 3.0;
        r.check((v - want).abs() <= 1e-6, || format!("k = {k}: {v:.9} vs {want:.9}"));
        let b = oracle::brute_sk_norm(&phi, k, &ocfg).unwrap();
        r.check((b - v).abs() <= 1e-3, || format!("k = {k}: oracle {b:.6} vs optimizer {v:.6}"));
    }
    let mut rng = RandomConfig::new(22).rng();
    for i in 0..50 {
        let (m, n) = [(2, 2), (2, 3), (3, 3), (3, 2)][i % 4];
        let x = random_op(m, n, &mut rng);
        let v = sk_norm(&x, m.min(n), &cfg(i as u64)).unwrap().value;
        let want = operator_norm(x.matrix());
        r.check((v - want).abs() <= 1e-8, || format!("random #{i}: {v} vs {want}"));
    }
    r.finish("S(k) norm of the maximally entangled projector and full-rank case");
}

#[test]
fn criterion_03_swap_block_positivity() {
    let mut r = Report::new(3);
    for n in [2, 3] {
        let s = swap(n);
        let v1 = k_block_positivity(&s, 1, &cfg(31)).unwrap();
        r.check(v1.status == BlockStatus::HeuristicallyPositive && v1.min_value >= -1e-8, || {
            format!("n = {n}, k = 1: {:?} min {}", v1.status, v1.min_value)
        });
        let v2 = k_block_positivity(&s, 2, &cfg(32)).unwrap();
        r.check(v2.status == BlockStatus::Refuted && (v2.min_value + 1.0).abs() <= 1e-6, || {
            format!("n = {n}, k = 2: {:?} min {}", v2.status, v2.min_value)
        });
    }
    r.finish("SWAP is 1-block positive and refuted at k = 2");
}

#[test]
fn criterion_04_reduction_threshold() {
    let mut r = Report::new(4);
    for k in 1..=2 {
        let below = 1.0 / k as f64 - 0.05;
        let above = 1.0 / k as f64 + 0.05;
        let v = k_positivity(&MapRepr::reduction(3, below), k, &cfg(41)).unwrap();
        r.check(v.status == BlockStatus::HeuristicallyPositive, || {
            format!("k = {k}, p = {below}: {:?} ({})", v.status, v.min_value)
        });
        let v = k_positivity(&MapRepr::reduction(3, above), k, &cfg(42)).unwrap();
        r.check(v.status == BlockStatus::Refuted, || format!("k = {k}, p = {above}: {:?} ({})", v.status, v.min_value));
        let want = 1.0 - above * k as f64;
        r.check((v.min_value - want).abs() <= 1e-6, || format!("k = {k}, p = {above}: min {} vs {want}", v.min_value));
    }
    r.finish("reduction maps are k-positive exactly below p = 1/k");
}

#[test]
fn criterion_05_norm_hierarchy() {
    let mut r = Report::new(5);
    let mut rng = RandomConfig::new(51).rng();
    let slack = 1e-6;
    for i in 0..100u64 {
        let x = random_op(2, 3, &mut rng);
        for k in 1..=2 {
            let c = cfg(1000 + i);
            let mo = min_order_norm(&x, k, &c).unwrap().value;
            let om = omin_norm(&x, k, &c).unwrap().value;
            let dec = dec_norm_best(&x, k, &c).unwrap().value;
            let up = max_order_norm_upper(&x, k, &c).unwrap().value;
            r.check(mo <= om + slack && om <= dec + slack && dec <= up + slack, || {
                format!("#{i}, k = {k}: {mo:.9} <= {om:.9} <= {dec:.9} <= {up:.9} violated")
            });
            r.check(om <= 2.0 * mo + slack, || format!("#{i}, k = {k}: {om:.9} > 2·{mo:.9}"));
        }
    }
    r.finish("minimal <= matrix-order <= decomposition <= maximal order norm");
}

fn random_hermiticity_preserving(n: usize, rng: &mut rand_chacha::ChaCha8Rng) -> MapRepr {
    let j = hermitian_part(&random_gaussian_matrix(n * n, n * n, rng));
    MapRepr::from_choi(BipartiteOperator::new(j, n, n).unwrap())
}

#[test]
fn criterion_06_stabilization() {
    let mut r = Report::new(6);
    let mut rng = RandomConfig::new(61).rng();
    let ocfg = OracleConfig { samples: 3000, polish_steps: 150, rng: RandomConfig::new(62) };
    for i in 0..20u64 {
        let phi = random_hermiticity_preserving(3, &mut rng);
        for k in 1..=2 {
            let level = idk_hermitian_sandwich_norm(&phi, k, &cfg(600 + i)).unwrap().value;
            let sampled = oracle::brute_stabilized_sandwich(&phi, k, k + 2, &ocfg).unwrap();
            r.check(sampled <= level + 1e-6, || format!("map #{i}, k = {k}: sampled {sampled:.9} > level {level:.9}"));
        }
    }
    r.finish("sampled values at m = k + 2 never exceed the k-level value");
}

#[test]
fn criterion_07_transpose_cb_values() {
    let mut r = Report::new(7);
    let t = MapRepr::transpose(3);
    let ocfg = OracleConfig::with_seed(71);
    for (k, v) in transpose_cases() {
        r.check((v - k as f64).abs() <= 1e-4, || format!("k = {k}: {v:.9}"));
        let b = oracle::brute_idk_norm(&t, k, &ocfg).unwrap();
        r.check((b - k as f64).abs() <= 1e-3, || format!("k = {k}: oracle {b:.6}"));
    }
    r.finish("norm of id_k ⊗ transpose on M_3 equals k");
}

#[test]
fn criterion_08_cptp_contraction() {
    let mut r = Report::new(8);
    let mut rng = RandomConfig::new(81).rng();
    for i in 0..30u64 {
        let (a, b) = [(2, 2), (2, 3), (3, 3), (3, 2)][i as usize % 4];
        let phi = MapRepr::random_cptp(a, b, &mut rng);
        for k in 1..=2 {
            let v = hermitian_trace_norm(&phi, k, &cfg(800 + i)).unwrap().value;
            r.check((v - 1.0).abs() <= 1e-9, || format!("channel #{i} ({a}→{b}), k = {k}: {v:.12}"));
        }
    }
    r.finish("channels have Hermitian trace norm 1 at k = 1, 2");
}

#[test]
fn criterion_09_schmidt_number_pipeline() {
    let mut r = Report::new(9);
    let w = reduction_witness(3, 2).unwrap();
    let det = detection_map(&MapRepr::reduction(3, 0.5), &cfg(91)).unwrap();
    let bound = ContractionBound::Computed(cfg(92));
    for (f, expect) in [(0.9, true), (0.6, false)] {
        let rho = isotropic(f, 3).unwrap();
        let cert = witness_check(&w, &rho, 2, &cfg(93)).unwrap();
        let want = 1.0 - 1.5 * f;
        r.check((cert.pairing - want).abs() <= 1e-9, || format!("F = {f}: pairing {} vs {want}", cert.pairing));
        r.check(cert.valid == expect, || format!("F = {f}: witness valid = {}", cert.valid));
        let out = sn_contraction_test(&rho, &det, 2, bound).unwrap();
        r.check(out.detected == expect, || {
            format!("F = {f}: contraction detected = {} (trace norm {})", out.detected, out.trace_norm)
        });
    }
    r.finish("isotropic F = 0.9 detected by witness and contraction, F = 0.6 by neither");
}

#[test]
fn criterion_10_cone_duality() {
    let mut r = Report::new(10);
    let mut rng = RandomConfig::new(101).rng();
    let n = 3;
    for i in 0..200u64 {
        let k = 1 + (i as usize % 2);
        let u1 = random_unitary(n, &mut rng);
        let u2 = random_unitary(n, &mut rng);
        let local = tensor(&u1, &u2);
        let base = reduction_witness(n, k).unwrap();
        let g = random_gaussian_matrix(n * n, 2, &mut rng) * C64::new(0.3, 0.0);
        let wm = &local * base.matrix() * local.adjoint() + &g * g.adjoint();
        let w = BipartiteOperator::new(wm, n, n).unwrap();
        if i < 20 {
            let v = k_block_positivity(&w, k, &cfg(1000 + i)).unwrap();
            r.check(v.status == BlockStatus::HeuristicallyPositive, || {
                format!("#{i}: generated W refuted ({})", v.min_value)
            });
        }
        let count = 1 + (i as usize % 5);
        let raw: Vec<f64> = (0..count).map(|_| rand::Rng::random::<f64>(&mut rng) + 0.05).collect();
        let total: f64 = raw.iter().sum();
        let terms = raw.iter().map(|&p| (p / total, random_sr_k_vector(Dims::new(n, n), k, &mut rng))).collect();
        let ens = SchmidtEnsemble::new(k, terms).unwrap();
        let rho = ens.density();
        let pairing = trace_product_re(w.matrix(), rho.matrix());
        r.check(pairing >= -1e-8, || format!("#{i}, k = {k}: Tr(Wρ) = {pairing}"));
    }
    r.finish("k-block-positive operators pair nonnegatively with Schmidt-number-k states");
}

#[test]
fn criterion_11_oracle_equivalence() {
    let mut r = Report::new(11);
    let ocfg = OracleConfig::with_seed(111);
    let tol = 1e-3;

    let x = example51(3);
    for k in 1..=3 {
        let a = min_order_norm(&x, k, &cfg(11)).unwrap().value;
        let b = oracle::brute_min_order_norm(&x, k, &ocfg).unwrap();
        r.check((a - b).abs() <= tol, || format!("example, minimal order, k = {k}: {a:.6} vs oracle {b:.6}"));
        let a = omin_norm(&x, k, &cfg(12)).unwrap().value;
        let b = oracle::brute_omin_norm(&x, k, &ocfg).unwrap();
        r.check((a - b).abs() <= tol, || format!("example, matrix-order, k = {k}: {a:.6} vs oracle {b:.6}"));
    }

    let phi = max_entangled_projector(3);
    for k in 1..=3 {
        let a = sk_norm(&phi, k, &cfg(21)).unwrap().value;
        let b = oracle::brute_sk_norm(&phi, k, &ocfg).unwrap();
        r.check((a - b).abs() <= tol, || format!("projector, k = {k}: {a:.6} vs oracle {b:.6}"));
    }
    let mut rng = RandomConfig::new(22).rng();
    for i in 0..50 {
        let (m, n) = [(2, 2), (2, 3), (3, 3), (3, 2)][i % 4];
        let x = random_op(m, n, &mut rng);
        let a = sk_norm(&x, m.min(n), &cfg(i as u64)).unwrap().value;
        let b = oracle::brute_sk_norm(&x, m.min(n), &OracleConfig { samples: 4000, ..ocfg }).unwrap();
        r.check((a - b).abs() <= tol, || format!("random #{i}: {a:.6} vs oracle {b:.6}"));
    }

    for n in [2, 3] {
        let s = swap(n);
        for k in 1..=2 {
            let a = k_block_positivity(&s, k, &cfg(30 + k as u64)).unwrap().min_value;
            let b = oracle::brute_block_min(&s, k, &ocfg).unwrap();
            r.check((a - b).abs() <= tol, || format!("SWAP n = {n}, k = {k}: {a:.6} vs oracle {b:.6}"));
        }
    }

    let t = MapRepr::transpose(3);
    for (k, a) in transpose_cases() {
        let b = oracle::brute_idk_norm(&t, k, &OracleConfig::with_seed(71)).unwrap();
        r.check((a - b).abs() <= tol, || format!("transpose, k = {k}: {a:.6} vs oracle {b:.6}"));
    }
    r.finish("optimizers and brute-force oracles agree within 1e-3");
}
