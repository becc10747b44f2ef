// SPDX-License-Identifier: Apache-2.0

//! Symmetric Lie algebras `(h, s)` and their `g + p` eigensplit.

use crate::error::{Error, Result};
use crate::lie::{LieAlgebra, LinearOperator};
use crate::linalg::{left_singular, max_abs, symmetric_eigen, worst, Mat, Subspace};
use crate::report::ResidualReport;
use crate::DEFAULT_TOL;

#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricLieAlgebra {
    algebra: LieAlgebra,
    s: LinearOperator,
    g: Subspace,
    p: Subspace,
}

/// Result of the orthogonality test with the spectrum of `-kappa_h` on `g`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Orthogonality {
    pub orthogonal: bool,
    pub min_eigenvalue: f64,
    pub max_eigenvalue: f64,
}

impl SymmetricLieAlgebra {
    /// Splits `h` into the `+1` and `-1` eigenspaces of `s` after checking
    /// that `s` is an involutive automorphism distinct from the identity.
    pub fn split_eigenspaces(algebra: LieAlgebra, s: LinearOperator) -> Result<Self> {
        let n = algebra.dim();
        if s.dim() != n || s.matrix.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: s.dim(),
            });
        }
        let scale = max_abs(&s.matrix).max(1.0);
        let inv = involution_residual(&s);
        if !(inv <= DEFAULT_TOL * scale * scale) {
            return Err(Error::NotInvolutive { residual: inv });
        }
        let aut = automorphism_residual(&algebra, &s);
        let bracket_scale = algebra.max_structure_constant().max(1.0);
        if !(aut <= DEFAULT_TOL * scale * scale * bracket_scale) {
            return Err(Error::NotAutomorphism { residual: aut });
        }
        let out = Self::from_parts_unchecked(algebra, s);
        if out.p.dim() == 0 {
            return Err(Error::TrivialInvolution);
        }
        Ok(out)
    }

    /// Eigensplit without validating `s`. The dimension of `g` is read off
    /// the trace of `(I + s)/2`; used to build deliberately broken inputs.
    pub fn from_parts_unchecked(algebra: LieAlgebra, s: LinearOperator) -> Self {
        let n = algebra.dim();
        let eye = Mat::identity(n, n);
        let plus = (&eye + &s.matrix) * 0.5;
        let minus = (&eye - &s.matrix) * 0.5;
        let k = plus.trace().round().clamp(0.0, n as f64) as usize;
        let g = leading_range(&plus, k);
        let p = leading_range(&minus, n - k);
        SymmetricLieAlgebra { algebra, s, g, p }
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    pub fn s(&self) -> &LinearOperator {
        &self.s
    }

    pub fn g(&self) -> &Subspace {
        &self.g
    }

    pub fn p(&self) -> &Subspace {
        &self.p
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    /// `(I + s)/2`, the projector onto `g` along `p`.
    pub fn g_projector(&self) -> Mat {
        let n = self.dim();
        (Mat::identity(n, n) + &self.s.matrix) * 0.5
    }

    /// `(I - s)/2`, the projector onto `p` along `g`.
    pub fn p_projector(&self) -> Mat {
        let n = self.dim();
        (Mat::identity(n, n) - &self.s.matrix) * 0.5
    }

    /// Residuals of `[g,g] in g`, `[g,p] in p` and `[p,p] in g`, each
    /// measured as the size of the component in the wrong eigenspace.
    pub fn check_bracket_relations(&self, tol: f64) -> ResidualReport {
        let pg = self.g_projector();
        let pp = self.p_projector();
        let gb = self.g.basis();
        let pb = self.p.basis();
        let mut report = ResidualReport::new();
        report.residual("gg_in_g", self.wrong_part(gb, gb, &pp), tol);
        report.residual("gp_in_p", self.wrong_part(gb, pb, &pg), tol);
        report.residual("pp_in_g", self.wrong_part(pb, pb, &pp), tol);
        report
    }

    fn wrong_part(&self, xs: &Mat, ys: &Mat, proj: &Mat) -> f64 {
        let mut res = 0.0_f64;
        for a in 0..xs.ncols() {
            let image = self.algebra.ad(&xs.column(a).into_owned()) * ys;
            res = worst(res, max_abs(&(proj * image)));
        }
        res
    }

    /// Full axiom suite: involution, automorphism, eigenspace and bracket
    /// relation residuals.
    pub fn axiom_report(&self, tol: f64) -> ResidualReport {
        let mut report = ResidualReport::new();
        report.residual("involution", involution_residual(&self.s), tol);
        report.residual(
            "automorphism",
            automorphism_residual(&self.algebra, &self.s),
            tol,
        );
        let sg = &self.s.matrix * self.g.basis() - self.g.basis();
        let sp = &self.s.matrix * self.p.basis() + self.p.basis();
        report.residual("s_on_g", max_abs(&sg), tol);
        report.residual("s_on_p", max_abs(&sp), tol);
        report.checks.extend(self.check_bracket_relations(tol).checks);
        report
    }

    /// `-kappa_h` restricted to `g` is positive definite: its smallest
    /// eigenvalue exceeds `DEFAULT_TOL` times its largest.
    pub fn is_orthogonal(&self) -> Orthogonality {
        let b = -&self.algebra.killing_form().matrix;
        let gb = self.g.basis();
        let restricted = gb.transpose() * b * gb;
        let (vals, _) = symmetric_eigen(&restricted);
        let (lo, hi) = match (vals.first(), vals.last()) {
            (Some(&lo), Some(&hi)) => (lo, hi),
            _ => (0.0, 0.0),
        };
        let orthogonal = vals.is_empty() || (hi > 0.0 && lo > DEFAULT_TOL * hi);
        Orthogonality {
            orthogonal,
            min_eigenvalue: lo,
            max_eigenvalue: hi,
        }
    }

    /// `g` meets the center of `h` trivially.
    pub fn is_effective(&self) -> bool {
        self.algebra.center().intersection_dim(&self.g) == 0
    }

    /// Transports the pair along the basis change `m`.
    pub fn change_basis(&self, m: &LinearOperator) -> Result<Self> {
        let algebra = self.algebra.change_basis(m)?;
        let minv = m.inverse().ok_or(Error::IllConditioned {
            condition: f64::INFINITY,
        })?;
        let s = m.compose(&self.s).compose(&minv);
        Ok(Self::from_parts_unchecked(algebra, s))
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let algebra = self.algebra.direct_sum(&other.algebra);
        let s = crate::linalg::block_diag(&[&self.s.matrix, &other.s.matrix]);
        Self::from_parts_unchecked(algebra, LinearOperator::new(s))
    }
}

/// `max |s^2 - I|`.
pub fn involution_residual(s: &LinearOperator) -> f64 {
    let n = s.dim();
    max_abs(&(&s.matrix * &s.matrix - Mat::identity(n, n)))
}

/// `max |s [e_i, e_j] - [s e_i, s e_j]|`, written as `s ad_i = ad_{s e_i} s`.
pub fn automorphism_residual(algebra: &LieAlgebra, s: &LinearOperator) -> f64 {
    let n = algebra.dim();
    let mut res = 0.0_f64;
    for i in 0..n {
        let lhs = &s.matrix * algebra.ad_basis(i);
        let rhs = algebra.ad(&s.matrix.column(i).into_owned()) * &s.matrix;
        res = worst(res, max_abs(&(lhs - rhs)));
    }
    res
}

fn leading_range(m: &Mat, k: usize) -> Subspace {
    if k == 0 {
        return Subspace::zero(m.nrows());
    }
    let (_, u) = left_singular(m);
    Subspace::from_orthonormal(u.columns(0, k).into_owned())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::builtin;
    use crate::linalg::Vector;

    fn swap(n: usize) -> Mat {
        let mut m = Mat::zeros(2 * n, 2 * n);
        for i in 0..n {
            m[(i, n + i)] = 1.0;
            m[(n + i, i)] = 1.0;
        }
        m
    }

    #[test]
    fn swap_splits_into_diagonal_and_antidiagonal() {
        let h = builtin("su2su2").unwrap();
        let sym = SymmetricLieAlgebra::split_eigenspaces(h, LinearOperator::new(swap(3))).unwrap();
        assert_eq!((sym.g().dim(), sym.p().dim()), (3, 3));
        let diag = Vector::from_vec(vec![1.0, 0.0, 0.0, 1.0, 0.0, 0.0]);
        let anti = Vector::from_vec(vec![0.0, 1.0, 0.0, 0.0, -1.0, 0.0]);
        assert!(sym.g().distance(&diag) < 1e-14);
        assert!(sym.p().distance(&anti) < 1e-14);
        assert!(sym.axiom_report(1e-12).passed());
        assert!(sym.is_orthogonal().orthogonal);
        assert!(sym.is_effective());
    }

    #[test]
    fn identity_is_rejected() {
        let h = builtin("su2").unwrap();
        let err = SymmetricLieAlgebra::split_eigenspaces(h, LinearOperator::identity(3));
        assert!(matches!(err, Err(Error::TrivialInvolution)));
    }

    #[test]
    fn non_involution_is_rejected() {
        let h = builtin("su2").unwrap();
        let s = Mat::from_diagonal(&Vector::from_vec(vec![1.0, 2.0, 1.0]));
        let err = SymmetricLieAlgebra::split_eigenspaces(h, LinearOperator::new(s));
        assert!(matches!(err, Err(Error::NotInvolutive { .. })));
    }

    #[test]
    fn non_automorphism_is_rejected() {
        // diag(1, 1, -1) on su(2) flips e3 without flipping [e1, e2].
        let h = builtin("su2").unwrap();
        let s = Mat::from_diagonal(&Vector::from_vec(vec![1.0, 1.0, -1.0]));
        let err = SymmetricLieAlgebra::split_eigenspaces(h, LinearOperator::new(s));
        assert!(matches!(err, Err(Error::NotAutomorphism { .. })));
    }

    #[test]
    fn corrupted_involution_breaks_bracket_relations() {
        let h = builtin("su2su2").unwrap();
        let mut s = swap(3);
        s[(0, 1)] += 1e-3;
        let sym = SymmetricLieAlgebra::from_parts_unchecked(h, LinearOperator::new(s));
        let report = sym.check_bracket_relations(1e-9);
        assert!(report.max_residual() > 1e-4, "{report}");
    }

    #[test]
    fn abelian_factor_in_g_is_neither_orthogonal_nor_effective() {
        let h = builtin("su2su2+r1").unwrap();
        let mut s = Mat::identity(7, 7);
        s.view_mut((0, 0), (6, 6)).copy_from(&swap(3));
        let sym = SymmetricLieAlgebra::split_eigenspaces(h, LinearOperator::new(s)).unwrap();
        let o = sym.is_orthogonal();
        assert!(!o.orthogonal);
        assert!(o.min_eigenvalue.abs() < 1e-12);
        assert!(!sym.is_effective());
    }
}
