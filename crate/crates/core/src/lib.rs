//! Schmidt-rank-constrained operator norms, block-positivity tests and
//! Schmidt-number certification for bipartite operators.
//!
//! Every operator lives on `C^m ⊗ C^n` with basis vector `|i>|j>` at flat
//! index `i·n + j`. Linear maps are stored as Choi matrices
//! `J(Φ) = Σ |i><j| ⊗ Φ(|i><j|)`.
//!
//! ```
//! use schmidt_norms::{fixtures, norms::{sk_norm, SeeSawConfig}};
//!
//! let x = fixtures::max_entangled_projector(3);
//! let est = sk_norm(&x, 1, &SeeSawConfig::with_seed(7)).unwrap();
//! assert!((est.value - 1.0 / 3.0).abs() < 1e-6);
//! ```

pub mod cones;
pub mod error;
pub mod fixtures;
pub mod frame;
pub mod io;
pub mod linalg;
pub mod maps;
pub mod norms;
pub mod oracle;
pub mod parallel;
pub mod rng;

pub use error::{Error, Result};
pub use frame::Frame;
pub use linalg::{BipartiteOperator, ComplexMatrix, ComplexVector, Dims, PureState, C64};
pub use maps::MapRepr;
pub use rng::RandomConfig;
