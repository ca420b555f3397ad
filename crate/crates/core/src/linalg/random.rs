use rand::Rng;
use rand_distr::StandardNormal;

use super::{ComplexMatrix, ComplexVector, Dims, PureState, C64};
use crate::frame::Frame;

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Matrix with i.i.d. standard complex Gaussian entries.
pub fn random_gaussian_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    // column-major fill keeps the draw order fixed
    ComplexMatrix::from_iterator(rows, cols, (0..rows * cols).map(|_| gaussian(rng)))
}

/// Haar-random unit vector.
pub fn random_unit_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexVector {
    loop {
        let v = ComplexVector::from_iterator(dim, (0..dim).map(|_| gaussian(rng)));
        let norm = v.norm();
        if norm > 1e-300 {
            return v.unscale(norm);
        }
    }
}

/// Unit vector `Σ_{i<k} a_i ⊗ b_i` with Gaussian factors, so `SR ≤ k` by construction.
pub fn random_sr_k_vector<R: Rng + ?Sized>(dims: Dims, k: usize, rng: &mut R) -> PureState {
    let k = k.clamp(1, dims.min());
    loop {
        let mut v = ComplexVector::zeros(dims.total());
        for _ in 0..k {
            let a = ComplexVector::from_iterator(dims.m, (0..dims.m).map(|_| gaussian(rng)));
            let b = ComplexVector::from_iterator(dims.n, (0..dims.n).map(|_| gaussian(rng)));
            v += a.kronecker(&b);
        }
        if let Ok(state) = PureState::normalized(v, dims.m, dims.n) {
            return state;
        }
    }
}

/// `k` orthonormal vectors in `C^n` from Gram-Schmidt on Gaussian draws.
pub fn random_frame<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Frame {
    loop {
        let g = random_gaussian_matrix(n, k, rng);
        if let Ok(frame) = Frame::orthonormalize(&g) {
            return frame;
        }
    }
}

/// Haar-random unitary via QR of a Gaussian matrix with the phase fix `Q · diag(r_ii/|r_ii|)`.
pub fn random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let g = random_gaussian_matrix(dim, dim, rng);
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        let mut col = q.column_mut(j);
        col *= phase;
    }
    q
}

/// Kraus operators `K_l : C^r → C^n` of a random channel.
///
/// Built from a Haar isometry `V : C^r → C^n ⊗ C^e` with environment dimension
/// `e = r·n`; `K_l[p][i] = V[p·e + l][i]`, so `Σ_l K_l* K_l = V* V = I_r`.
pub fn random_cptp<R: Rng + ?Sized>(r: usize, n: usize, rng: &mut R) -> Vec<ComplexMatrix> {
    let e = r * n;
    let u = random_unitary(n * e, rng);
    (0..e).map(|l| ComplexMatrix::from_fn(n, r, |p, i| u[(p * e + l, i)])).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_abs_diff, schmidt_rank, RANK_TOL};
    use crate::rng::RandomConfig;

    #[test]
    fn sr_k_vectors_have_bounded_rank() {
        let mut rng = RandomConfig::new(1).rng();
        for _ in 0..50 {
            let v = random_sr_k_vector(Dims::new(3, 3), 2, &mut rng);
            assert!(schmidt_rank(&v, RANK_TOL) <= 2);
        }
    }

    #[test]
    fn unitary_is_unitary() {
        let mut rng = RandomConfig::new(2).rng();
        let u = random_unitary(4, &mut rng);
        assert!(max_abs_diff(&(&u * u.adjoint()), &ComplexMatrix::identity(4, 4)) < 1e-12);
    }

    #[test]
    fn cptp_kraus_complete() {
        let mut rng = RandomConfig::new(3).rng();
        let ks = random_cptp(2, 2, &mut rng);
        let mut sum = ComplexMatrix::zeros(2, 2);
        for k in &ks {
            sum += k.adjoint() * k;
        }
        assert!(max_abs_diff(&sum, &ComplexMatrix::identity(2, 2)) < 1e-12);
    }

    #[test]
    fn frames_are_orthonormal() {
        let mut rng = RandomConfig::new(4).rng();
        let f = random_frame(5, 3, &mut rng);
        let b = f.matrix();
        assert!(max_abs_diff(&(b.adjoint() * b), &ComplexMatrix::identity(3, 3)) < 1e-12);
    }

    #[test]
    fn draws_are_reproducible() {
        let cfg = RandomConfig::with_stream(77, 3);
        let a = random_unitary(3, &mut cfg.rng());
        let b = random_unitary(3, &mut cfg.rng());
        assert_eq!(a, b);
    }
}
