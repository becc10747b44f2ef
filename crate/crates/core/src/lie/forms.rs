// SPDX-License-Identifier: Apache-2.0

use crate::error::{Error, Result};
use crate::linalg::{max_abs, Mat, Vector};

/// Bilinear form `f(x, y) = x^T M y`.
#[derive(Clone, Debug, PartialEq)]
pub struct BilinearForm {
    pub matrix: Mat,
    pub symmetric: bool,
}

impl BilinearForm {
    pub fn general(matrix: Mat) -> Self {
        BilinearForm {
            matrix,
            symmetric: false,
        }
    }

    /// Symmetric form; the stored matrix is the exact average of `m` and its
    /// transpose. Fails when `m` is not symmetric to `tol` (relative).
    pub fn symmetric(m: Mat, tol: f64) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch {
                expected: m.nrows(),
                found: m.ncols(),
            });
        }
        let asym = max_abs(&(&m - m.transpose()));
        if asym > tol * max_abs(&m).max(1.0) {
            return Err(Error::InvalidInner(format!(
                "matrix is not symmetric (residual {asym:e})"
            )));
        }
        Ok(Self::symmetric_exact(m))
    }

    pub(crate) fn symmetric_exact(m: Mat) -> Self {
        let sym = (&m + m.transpose()) * 0.5;
        BilinearForm {
            matrix: sym,
            symmetric: true,
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn eval(&self, x: &Vector, y: &Vector) -> f64 {
        x.dot(&(&self.matrix * y))
    }

    pub fn scaled(&self, c: f64) -> Self {
        BilinearForm {
            matrix: &self.matrix * c,
            symmetric: self.symmetric,
        }
    }

    /// Pullback along `m`: `f(m x, m y)`.
    pub fn pullback(&self, m: &Mat) -> Self {
        let out = m.transpose() * &self.matrix * m;
        if self.symmetric {
            Self::symmetric_exact(out)
        } else {
            Self::general(out)
        }
    }
}

/// Linear endomorphism stored as its matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearOperator {
    pub matrix: Mat,
}

impl LinearOperator {
    pub fn new(matrix: Mat) -> Self {
        LinearOperator { matrix }
    }

    pub fn identity(n: usize) -> Self {
        LinearOperator {
            matrix: Mat::identity(n, n),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn apply(&self, x: &Vector) -> Vector {
        &self.matrix * x
    }

    pub fn compose(&self, other: &LinearOperator) -> LinearOperator {
        LinearOperator::new(&self.matrix * &other.matrix)
    }

    pub fn inverse(&self) -> Option<LinearOperator> {
        self.matrix.clone().try_inverse().map(LinearOperator::new)
    }
}
