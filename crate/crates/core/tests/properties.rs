//! Randomized invariants over seeds and small dimensions.

use proptest::prelude::*;

use schmidt_norms::linalg::{
    max_abs_diff, operator_norm, random_cptp, random_gaussian_matrix, random_sr_k_vector, random_unit_vector,
    random_unitary, schmidt_decompose, tensor, truncate_schmidt,
};
use schmidt_norms::maps::idk_op_norm;
use schmidt_norms::norms::{omin_norm, sk_norm, SeeSawConfig};
use schmidt_norms::{BipartiteOperator, Dims, MapRepr, PureState, RandomConfig};

const TOL: f64 = 1e-6;

fn random_op(seed: u64, m: usize, n: usize) -> BipartiteOperator {
    let mut rng = RandomConfig::new(seed).rng();
    BipartiteOperator::new(random_gaussian_matrix(m * n, m * n, &mut rng), m, n).unwrap()
}

fn cfg(seed: u64) -> SeeSawConfig {
    SeeSawConfig::with_seed(seed)
}

fn dims() -> impl Strategy<Value = (usize, usize)> {
    (2usize..=3, 2usize..=3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn sk_is_monotone_and_capped(seed in any::<u64>(), (m, n) in dims()) {
        let x = random_op(seed, m, n);
        let full = operator_norm(x.matrix());
        let mut prev = 0.0;
        for k in 1..=m.min(n) {
            let v = sk_norm(&x, k, &cfg(seed)).unwrap().value;
            prop_assert!(v >= prev - TOL, "k = {}: {} < {}", k, v, prev);
            prop_assert!(v <= full + 1e-9);
            prev = v;
        }
        prop_assert!((prev - full).abs() < TOL);
    }

    #[test]
    fn sk_local_unitary_invariance(seed in any::<u64>(), (m, n) in dims(), k in 1usize..=2) {
        let x = random_op(seed, m, n);
        let mut rng = RandomConfig::new(seed ^ 0x5eed).rng();
        let u = tensor(&random_unitary(m, &mut rng), &random_unitary(n, &mut rng));
        let y = BipartiteOperator::new(&u * x.matrix() * u.adjoint(), m, n).unwrap();
        let a = sk_norm(&x, k, &cfg(1)).unwrap().value;
        let b = sk_norm(&y, k, &cfg(2)).unwrap().value;
        prop_assert!((a - b).abs() < TOL, "{} vs {}", a, b);
    }

    #[test]
    fn omin_below_sk(seed in any::<u64>(), (m, n) in dims(), k in 1usize..=2) {
        let x = random_op(seed, m, n);
        let a = omin_norm(&x, k, &cfg(seed)).unwrap().value;
        let b = sk_norm(&x, k, &cfg(seed)).unwrap().value;
        prop_assert!(a <= b + TOL, "{} > {}", a, b);
    }

    #[test]
    fn schmidt_round_trip(seed in any::<u64>(), (m, n) in dims()) {
        let mut rng = RandomConfig::new(seed).rng();
        let v = PureState::new(random_unit_vector(m * n, &mut rng), m, n).unwrap();
        let d = schmidt_decompose(&v).unwrap();
        let back = d.reconstruct(d.coeffs.len());
        prop_assert!((back - v.amplitudes()).norm() < 1e-12);
        for w in d.coeffs.windows(2) {
            prop_assert!(w[0] >= w[1]);
        }
        let total: f64 = d.coeffs.iter().map(|s| s * s).sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn truncation_is_optimal(seed in any::<u64>(), (m, n) in dims()) {
        let mut rng = RandomConfig::new(seed).rng();
        let v = PureState::new(random_unit_vector(m * n, &mut rng), m, n).unwrap();
        let coeffs = schmidt_decompose(&v).unwrap().coeffs;
        for k in 1..=m.min(n) {
            let t = truncate_schmidt(&v, k).unwrap();
            let best: f64 = coeffs[..k].iter().map(|s| s * s).sum::<f64>().sqrt();
            prop_assert!((t.overlap(&v) - best).abs() < 1e-10);
            for _ in 0..20 {
                let w = random_sr_k_vector(Dims::new(m, n), k, &mut rng);
                prop_assert!(w.overlap(&v) <= best + 1e-12);
            }
        }
    }

    #[test]
    fn choi_round_trip(seed in any::<u64>(), r in 2usize..=3, n in 2usize..=3) {
        let mut rng = RandomConfig::new(seed).rng();
        let kraus = random_cptp(r, n, &mut rng);
        let phi = MapRepr::from_kraus(&kraus).unwrap();
        let again = MapRepr::from_choi(phi.choi().clone());
        let x = random_gaussian_matrix(r, r, &mut rng);
        let direct = kraus.iter().fold(schmidt_norms::ComplexMatrix::zeros(n, n), |acc, k| acc + k * &x * k.adjoint());
        prop_assert!(max_abs_diff(&phi.apply(&x).unwrap(), &direct) < 1e-12);
        prop_assert!(max_abs_diff(&again.apply(&x).unwrap(), &direct) < 1e-12);
        prop_assert!(phi.is_completely_positive() && phi.is_trace_preserving());
    }

    #[test]
    fn idk_norm_monotone(seed in any::<u64>(), r in 2usize..=3, n in 2usize..=3) {
        let mut rng = RandomConfig::new(seed).rng();
        let j = random_gaussian_matrix(r * n, r * n, &mut rng);
        let phi = MapRepr::from_choi(BipartiteOperator::new(j, r, n).unwrap());
        let mut prev = 0.0;
        for k in 1..=3 {
            let v = idk_op_norm(&phi, k, &cfg(seed)).unwrap().value;
            prop_assert!(v >= prev - TOL, "k = {}: {} < {}", k, v, prev);
            prev = v;
        }
    }
}
