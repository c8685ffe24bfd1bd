//! Exact verification engine for quadratic annihilator identities of the
//! orthogonal and symplectic Lie algebras so(2n) and sp(2n), treated in one
//! code path through the sign ε.

pub mod error;
pub mod fock;
pub mod hnn;
pub mod kmatrix;
pub mod lie;
pub mod report;
pub mod linalg;
pub mod scalar;
pub mod sympoly;
pub mod verdict;

pub use error::{Error, Result};
pub use lie::{AlgebraContext, Block, Epsilon, LieElement, Metric};
pub use scalar::Q;
pub use verdict::Verdict;
