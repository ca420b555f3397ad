//! Named operators used by tests, benches and the CLI `fixtures emit` command.

use crate::linalg::{BipartiteOperator, ComplexMatrix, ComplexVector, PureState, C64};

/// `|φ><ψ|` with `φ = Σ|ii>/√n` and `ψ = Σ|i, i+1 mod n>/√n`.
pub fn example51(n: usize) -> BipartiteOperator {
    let s = 1.0 / (n as f64).sqrt();
    let mut phi = ComplexVector::zeros(n * n);
    let mut psi = ComplexVector::zeros(n * n);
    for i in 0..n {
        phi[i * n + i] = C64::new(s, 0.0);
        psi[i * n + (i + 1) % n] = C64::new(s, 0.0);
    }
    BipartiteOperator::new(&phi * psi.adjoint(), n, n).expect("square by construction")
}

/// The flip `|ij> ↦ |ji>` on `C^n ⊗ C^n`.
pub fn swap(n: usize) -> BipartiteOperator {
    let mut x = ComplexMatrix::zeros(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            x[(j * n + i, i * n + j)] = C64::new(1.0, 0.0);
        }
    }
    BipartiteOperator::new(x, n, n).expect("square by construction")
}

/// `|φ><φ|` for the maximally entangled `φ` on `C^n ⊗ C^n`.
pub fn max_entangled_projector(n: usize) -> BipartiteOperator {
    BipartiteOperator::projector(&PureState::maximally_entangled(n))
}
