// SPDX-License-Identifier: Apache-2.0

//! Finite-dimensional real Lie algebras in structure-constant form.
//!
//! The structure tensor `c[i][j][k]`, meaning `[e_i, e_j] = sum_k c[i][j][k] e_k`,
//! is stored as the adjoint matrices `ad(e_i)`, with `ad(e_i)[(k, j)] = c[i][j][k]`.
//! Every operation that needs brackets works directly with these matrices.

mod catalog;
mod forms;

pub use catalog::{builtin, MatrixLieAlgebra};
pub use forms::{BilinearForm, LinearOperator};

use crate::error::{Error, Result};
use crate::linalg::{self, max_abs, worst, Mat, Subspace, Vector};
use crate::DEFAULT_TOL;

/// Largest condition number accepted by [`LieAlgebra::change_basis`].
pub const MAX_CONDITION: f64 = 1e8;

#[derive(Clone, Debug, PartialEq)]
pub struct LieAlgebra {
    ad: Vec<Mat>,
    labels: Vec<String>,
}

impl LieAlgebra {
    /// Builds an algebra from a structure-constant function. Antisymmetry is
    /// enforced; the Jacobi identity is not (see [`Self::jacobi_residual`]).
    pub fn from_structure(
        labels: Vec<String>,
        c: impl Fn(usize, usize, usize) -> f64,
    ) -> Result<Self> {
        let n = labels.len();
        let ad = (0..n)
            .map(|i| Mat::from_fn(n, n, |k, j| c(i, j, k)))
            .collect();
        Self::from_ad(labels, ad)
    }

    /// Builds an algebra from its adjoint matrices.
    pub fn from_ad(labels: Vec<String>, ad: Vec<Mat>) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::Format("Lie algebra must have positive dimension".into()));
        }
        if ad.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: ad.len(),
            });
        }
        for m in &ad {
            if m.nrows() != n || m.ncols() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: m.nrows().max(m.ncols()),
                });
            }
        }
        let alg = LieAlgebra { ad, labels };
        alg.check_antisymmetry()?;
        Ok(alg)
    }

    fn check_antisymmetry(&self) -> Result<()> {
        let n = self.dim();
        let scale = self.ad.iter().map(max_abs).fold(1.0, f64::max);
        for i in 0..n {
            for j in i..n {
                for k in 0..n {
                    let r = (self.ad[i][(k, j)] + self.ad[j][(k, i)]).abs();
                    if r.is_nan() || r > DEFAULT_TOL * scale {
                        return Err(Error::NotAntisymmetric {
                            i,
                            j,
                            k,
                            residual: r,
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// Abelian algebra `R^n`.
    pub fn abelian(n: usize) -> Self {
        let labels = (1..=n).map(|i| format!("t{i}")).collect();
        LieAlgebra {
            ad: vec![Mat::zeros(n, n); n],
            labels,
        }
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// `c[i][j][k]`.
    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> f64 {
        self.ad[i][(k, j)]
    }

    pub fn ad_basis(&self, i: usize) -> &Mat {
        &self.ad[i]
    }

    pub fn ad_matrices(&self) -> &[Mat] {
        &self.ad
    }

    /// Matrix of `ad_x`.
    pub fn ad(&self, x: &Vector) -> Mat {
        let n = self.dim();
        let mut out = Mat::zeros(n, n);
        for (xi, a) in x.iter().zip(&self.ad) {
            if *xi != 0.0 {
                out += a * *xi;
            }
        }
        out
    }

    pub fn bracket(&self, x: &Vector, y: &Vector) -> Result<Vector> {
        let n = self.dim();
        for v in [x, y] {
            if v.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: v.len(),
                });
            }
        }
        Ok(self.br(x, y))
    }

    /// Bracket without the dimension check.
    pub(crate) fn br(&self, x: &Vector, y: &Vector) -> Vector {
        let mut out = Vector::zeros(self.dim());
        for (xi, a) in x.iter().zip(&self.ad) {
            if *xi != 0.0 {
                out += (a * y) * *xi;
            }
        }
        out
    }

    /// Basis bracket `[e_i, e_j]`.
    pub fn basis_bracket(&self, i: usize, j: usize) -> Vector {
        self.ad[i].column(j).into_owned()
    }

    /// Largest infinity-norm of the cyclic Jacobi sum over basis triples.
    pub fn jacobi_residual(&self) -> f64 {
        let n = self.dim();
        let mut res = 0.0_f64;
        for i in 0..n {
            for j in (i + 1)..n {
                let bij = self.basis_bracket(i, j);
                let ad_ij = self.ad(&bij);
                for k in (j + 1)..n {
                    let bjk = self.basis_bracket(j, k);
                    let bki = self.basis_bracket(k, i);
                    let total = ad_ij.column(k).into_owned()
                        + self.ad(&bjk).column(i)
                        + self.ad(&bki).column(j);
                    res = worst(res, linalg::max_abs_vec(&total));
                }
            }
        }
        res
    }

    /// Killing form `kappa(x, y) = tr(ad_x ad_y)`.
    pub fn killing_form(&self) -> BilinearForm {
        let n = self.dim();
        let mut k = Mat::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let v = self.ad[i].component_mul(&self.ad[j].transpose()).sum();
                k[(i, j)] = v;
                k[(j, i)] = v;
            }
        }
        BilinearForm::symmetric_exact(k)
    }

    /// Largest `|f([x, y], z) + f(y, [x, z])|` over basis triples.
    pub fn invariance_residual(&self, form: &Mat) -> f64 {
        self.ad
            .iter()
            .map(|a| max_abs(&(a.transpose() * form + form * a)))
            .fold(0.0, worst)
    }

    /// Center as the common null space of the adjoint matrices.
    pub fn center(&self) -> Subspace {
        let n = self.dim();
        // rows indexed by (j, k): sum_i v_i c[i][j][k] = 0
        let mut stacked = Mat::zeros(n * n, n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    stacked[(j * n + k, i)] = self.ad[i][(k, j)];
                }
            }
        }
        let scale = max_abs(&stacked);
        Subspace::null_space_scaled(&stacked, scale)
    }

    pub fn direct_sum(&self, other: &LieAlgebra) -> LieAlgebra {
        let (n1, n2) = (self.dim(), other.dim());
        let n = n1 + n2;
        let mut ad = Vec::with_capacity(n);
        for a in &self.ad {
            let mut m = Mat::zeros(n, n);
            m.view_mut((0, 0), (n1, n1)).copy_from(a);
            ad.push(m);
        }
        for a in &other.ad {
            let mut m = Mat::zeros(n, n);
            m.view_mut((n1, n1), (n2, n2)).copy_from(a);
            ad.push(m);
        }
        let labels = self
            .labels
            .iter()
            .cloned()
            .chain(other.labels.iter().cloned())
            .collect();
        LieAlgebra { ad, labels }
    }

    /// Transports the bracket along `m`, so that `m` becomes an isomorphism
    /// from `self` onto the result: `[m x, m y]' = m [x, y]`.
    pub fn change_basis(&self, m: &LinearOperator) -> Result<LieAlgebra> {
        let n = self.dim();
        if m.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: m.dim(),
            });
        }
        let rcond = linalg::reciprocal_condition(&m.matrix);
        if !(rcond * MAX_CONDITION > 1.0) {
            return Err(Error::IllConditioned {
                condition: 1.0 / rcond,
            });
        }
        let minv = m
            .matrix
            .clone()
            .try_inverse()
            .ok_or(Error::IllConditioned {
                condition: f64::INFINITY,
            })?;
        let ad = (0..n)
            .map(|a| &m.matrix * self.ad(&minv.column(a).into_owned()) * &minv)
            .collect();
        let mut out = LieAlgebra {
            ad,
            labels: self.labels.clone(),
        };
        out.antisymmetrize();
        Ok(out)
    }

    /// Structure of the subalgebra spanned by the columns of `w`, in the
    /// coordinates of those columns. Returns the algebra and the closure
    /// residual: the largest distance of a basis bracket from `span(w)`.
    pub fn restrict(&self, w: &Mat) -> Result<(LieAlgebra, f64)> {
        let n = self.dim();
        if w.nrows() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: w.nrows(),
            });
        }
        let m = w.ncols();
        let winv = linalg::left_inverse(w).ok_or(Error::IllConditioned {
            condition: f64::INFINITY,
        })?;
        let mut closure = 0.0_f64;
        let mut ad = Vec::with_capacity(m);
        for a in 0..m {
            let image = self.ad(&w.column(a).into_owned()) * w;
            let coords = &winv * &image;
            closure = worst(closure, max_abs(&(&image - w * &coords)));
            ad.push(coords);
        }
        let labels = (1..=m).map(|i| format!("f{i}")).collect();
        let mut out = LieAlgebra { ad, labels };
        out.antisymmetrize();
        Ok((out, closure))
    }

    /// Moves each antisymmetric pair to its exact average. Used after
    /// floating-point transforms that preserve antisymmetry only to round-off.
    fn antisymmetrize(&mut self) {
        let n = self.dim();
        for i in 0..n {
            for j in i..n {
                for k in 0..n {
                    let a = 0.5 * (self.ad[i][(k, j)] - self.ad[j][(k, i)]);
                    self.ad[i][(k, j)] = a;
                    self.ad[j][(k, i)] = -a;
                }
            }
        }
    }

    /// Adds `eps` to `c[i][j][k]` and subtracts it from `c[j][i][k]`. The
    /// result stays antisymmetric but generally breaks the Jacobi identity.
    pub fn perturbed(&self, i: usize, j: usize, k: usize, eps: f64) -> LieAlgebra {
        let mut out = self.clone();
        out.ad[i][(k, j)] += eps;
        out.ad[j][(k, i)] -= eps;
        out
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: labels.len(),
            });
        }
        self.labels = labels;
        Ok(self)
    }

    /// Largest absolute structure constant.
    pub fn max_structure_constant(&self) -> f64 {
        self.ad.iter().map(max_abs).fold(0.0, worst)
    }
}
