// SPDX-License-Identifier: Apache-2.0

//! Legendrian symmetric Lie algebras: construction, validation, canonical
//! decomposition, and numerical verification of the associated moment-space
//! forms on matrix-group realizations.

pub mod decomposition;
pub mod error;
pub mod format;
pub mod groups;
pub mod legendrian;
pub mod lie;
pub mod linalg;
pub mod report;
pub mod symmetric;

pub use decomposition::{decompose, Component, DecompositionResult, JOperator};
pub use error::{Error, Hypothesis, Result};
pub use groups::{GroupPoint, GroupRealization};
pub use legendrian::{CanonicalType, LegendrianSymmetricAlgebra};
pub use lie::{builtin, BilinearForm, LieAlgebra, LinearOperator, MatrixLieAlgebra};
pub use linalg::Subspace;
pub use report::{Bound, Check, ResidualReport};
pub use symmetric::SymmetricLieAlgebra;

/// Default absolute tolerance for axiom residuals on inputs whose structure
/// constants are of order one.
pub const DEFAULT_TOL: f64 = 1e-9;
