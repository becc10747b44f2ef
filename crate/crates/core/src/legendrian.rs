// SPDX-License-Identifier: Apache-2.0

//! Legendrian forms on symmetric Lie algebras and the three canonical
//! constructions over a compact Lie algebra `g`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Hypothesis, Result};
use crate::lie::{BilinearForm, LieAlgebra, LinearOperator};
use crate::linalg::{block_diag, expm, max_abs, reciprocal_condition, spectral_norm, Mat};
use crate::report::ResidualReport;
use crate::symmetric::SymmetricLieAlgebra;
use crate::DEFAULT_TOL;

/// Which canonical model a Legendrian algebra was built as.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CanonicalType {
    Euclidean,
    Compact,
    Noncompact,
}

impl CanonicalType {
    pub fn name(self) -> &'static str {
        match self {
            CanonicalType::Euclidean => "euclidean",
            CanonicalType::Compact => "compact",
            CanonicalType::Noncompact => "noncompact",
        }
    }

    /// Short tag: `0`, `+` or `-`.
    pub fn tag(self) -> &'static str {
        match self {
            CanonicalType::Euclidean => "0",
            CanonicalType::Compact => "+",
            CanonicalType::Noncompact => "-",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "euclidean" | "0" => Some(CanonicalType::Euclidean),
            "compact" | "+" => Some(CanonicalType::Compact),
            "noncompact" | "-" => Some(CanonicalType::Noncompact),
            _ => None,
        }
    }

    pub const ALL: [CanonicalType; 3] = [
        CanonicalType::Euclidean,
        CanonicalType::Compact,
        CanonicalType::Noncompact,
    ];
}

impl std::fmt::Display for CanonicalType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LegendrianSymmetricAlgebra {
    sym: SymmetricLieAlgebra,
    lambda: BilinearForm,
    inner: Option<BilinearForm>,
}

impl LegendrianSymmetricAlgebra {
    /// Accepts the triple only if every check of [`Self::validate`] passes at
    /// `DEFAULT_TOL`, scaled by the size of the data.
    pub fn new(
        sym: SymmetricLieAlgebra,
        lambda: BilinearForm,
        inner: Option<BilinearForm>,
    ) -> Result<Self> {
        let out = Self::new_unchecked(sym, lambda, inner)?;
        let report = out.validate(out.default_tolerance());
        if let Some(fail) = report.failures().next() {
            return Err(Error::Hypothesis {
                hypothesis: Hypothesis::Legendrian,
                detail: format!(
                    "check '{}' = {:e} against threshold {:e}",
                    fail.name, fail.value, fail.threshold
                ),
            });
        }
        Ok(out)
    }

    /// Shape checks only.
    pub fn new_unchecked(
        sym: SymmetricLieAlgebra,
        lambda: BilinearForm,
        inner: Option<BilinearForm>,
    ) -> Result<Self> {
        let n = sym.dim();
        if lambda.matrix.nrows() != n || lambda.matrix.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: lambda.matrix.nrows(),
            });
        }
        Ok(LegendrianSymmetricAlgebra { sym, lambda, inner })
    }

    /// Tolerance appropriate for the magnitudes of this algebra's data.
    pub fn default_tolerance(&self) -> f64 {
        let scale = max_abs(&self.lambda.matrix).max(1.0)
            * self.sym.algebra().max_structure_constant().max(1.0)
            * max_abs(&self.sym.s().matrix).max(1.0);
        DEFAULT_TOL * scale
    }

    pub fn sym(&self) -> &SymmetricLieAlgebra {
        &self.sym
    }

    pub fn algebra(&self) -> &LieAlgebra {
        self.sym.algebra()
    }

    pub fn lambda(&self) -> &BilinearForm {
        &self.lambda
    }

    pub fn inner(&self) -> Option<&BilinearForm> {
        self.inner.as_ref()
    }

    pub fn dim(&self) -> usize {
        self.sym.dim()
    }

    /// Residuals of every Legendrian axiom plus the nondegeneracy margin
    /// (reciprocal condition number of `Lambda`, required above `tol`).
    pub fn validate(&self, tol: f64) -> ResidualReport {
        let l = &self.lambda.matrix;
        let s = &self.sym.s().matrix;
        let gb = self.sym.g().basis();
        let pb = self.sym.p().basis();
        let mut report = ResidualReport::new();
        report.residual("symmetry", max_abs(&(l - l.transpose())), tol);
        report.margin("nondegeneracy", reciprocal_condition(l), tol);
        report.residual("s_skew", max_abs(&(s.transpose() * l + l * s)), tol);
        report.residual(
            "ad_invariance",
            self.sym.algebra().invariance_residual(l),
            tol,
        );
        report.residual("g_isotropy", max_abs(&(gb.transpose() * l * gb)), tol);
        report.residual("p_isotropy", max_abs(&(pb.transpose() * l * pb)), tol);
        report
    }

    /// Same algebra and involution with a different form; not validated.
    pub fn with_lambda(&self, lambda: BilinearForm) -> Result<Self> {
        Self::new_unchecked(self.sym.clone(), lambda, self.inner.clone())
    }

    /// Same algebra and form with a different involution; not validated.
    pub fn with_involution(&self, s: LinearOperator) -> Result<Self> {
        let sym = SymmetricLieAlgebra::from_parts_unchecked(self.algebra().clone(), s);
        Self::new_unchecked(sym, self.lambda.clone(), self.inner.clone())
    }

    /// Transports everything along `m`: brackets so that `m` is an
    /// isomorphism, `s -> m s m^-1`, `Lambda -> m^-T Lambda m^-1`.
    pub fn change_basis(&self, m: &LinearOperator) -> Result<Self> {
        let sym = self.sym.change_basis(m)?;
        let minv = m.inverse().ok_or(Error::IllConditioned {
            condition: f64::INFINITY,
        })?;
        let lambda = self.lambda.pullback(&minv.matrix);
        Ok(LegendrianSymmetricAlgebra {
            sym,
            lambda,
            inner: self.inner.clone(),
        })
    }

    /// Basis change by `exp(A)`, `A` a seeded Gaussian matrix scaled to
    /// spectral norm 1, so the condition number is at most `e^2`.
    pub fn scramble(&self, seed: u64) -> Self {
        let m = scramble_matrix(self.dim(), seed);
        self.change_basis(&LinearOperator::new(m))
            .expect("exp of a norm-one matrix is well conditioned")
    }

    /// Direct sum; the involution and form are block diagonal.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let sym = self.sym.direct_sum(&other.sym);
        let lambda = BilinearForm::symmetric_exact(block_diag(&[
            &self.lambda.matrix,
            &other.lambda.matrix,
        ]));
        let inner = match (&self.inner, &other.inner) {
            (Some(a), Some(b)) => Some(BilinearForm::symmetric_exact(block_diag(&[
                &a.matrix, &b.matrix,
            ]))),
            _ => None,
        };
        LegendrianSymmetricAlgebra { sym, lambda, inner }
    }
}

/// `exp(A)` for a seeded standard-normal `A` rescaled to spectral norm 1.
pub fn scramble_matrix(n: usize, seed: u64) -> Mat {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = Mat::from_fn(n, n, |_, _| rng.sample::<f64, _>(StandardNormal));
    let norm = spectral_norm(&a);
    let a = if norm > 0.0 { a / norm } else { a };
    expm(&a)
}

/// Builds the canonical model of the given type over `g`. `inner` defaults
/// to `-kappa_g` for the compact and noncompact types.
pub fn build(
    kind: CanonicalType,
    g: &LieAlgebra,
    inner: Option<&BilinearForm>,
) -> Result<LegendrianSymmetricAlgebra> {
    match kind {
        CanonicalType::Euclidean => build_euclidean(g),
        CanonicalType::Compact | CanonicalType::Noncompact => {
            let b = match inner {
                Some(b) => b.clone(),
                None => default_inner(g)?,
            };
            if kind == CanonicalType::Compact {
                build_compact(g, &b)
            } else {
                build_noncompact(g, &b)
            }
        }
    }
}

/// `-kappa_g`, provided it is positive definite.
pub fn default_inner(g: &LieAlgebra) -> Result<BilinearForm> {
    let b = g.killing_form().scaled(-1.0);
    check_inner(g, &b).map_err(|_| {
        Error::InvalidInner(
            "-kappa is not positive definite on g; an explicit inner product is required".into(),
        )
    })?;
    Ok(b)
}

/// `B` must be symmetric, `ad`-invariant and positive definite.
pub fn check_inner(g: &LieAlgebra, b: &BilinearForm) -> Result<()> {
    let n = g.dim();
    if b.matrix.nrows() != n || b.matrix.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: b.matrix.nrows(),
        });
    }
    let scale = max_abs(&b.matrix).max(1.0) * g.max_structure_constant().max(1.0);
    let asym = max_abs(&(&b.matrix - b.matrix.transpose()));
    if asym > DEFAULT_TOL * scale {
        return Err(Error::InvalidInner(format!(
            "B is not symmetric (residual {asym:e})"
        )));
    }
    let inv = g.invariance_residual(&b.matrix);
    if !(inv <= DEFAULT_TOL * scale) {
        return Err(Error::InvalidInner(format!(
            "B is not ad-invariant (residual {inv:e})"
        )));
    }
    let (vals, _) = crate::linalg::symmetric_eigen(&b.matrix);
    let hi = vals.last().copied().unwrap_or(0.0);
    let lo = vals.first().copied().unwrap_or(0.0);
    if !(hi > 0.0 && lo > DEFAULT_TOL * hi) {
        return Err(Error::InvalidInner(format!(
            "B is not positive definite (eigenvalues in [{lo:e}, {hi:e}])"
        )));
    }
    Ok(())
}

fn suffixed(g: &LieAlgebra, suffix: &str) -> Vec<String> {
    g.labels().iter().map(|l| format!("{l}{suffix}")).collect()
}

fn finish(
    algebra: LieAlgebra,
    s: Mat,
    lambda: Mat,
    inner: Option<BilinearForm>,
) -> Result<LegendrianSymmetricAlgebra> {
    let sym = SymmetricLieAlgebra::split_eigenspaces(algebra, LinearOperator::new(s))?;
    LegendrianSymmetricAlgebra::new(sym, BilinearForm::symmetric_exact(lambda), inner)
}

/// The Euclidean model `g x| g*` with the coadjoint action
/// `ad*_x = -(ad_x)^T` in dual coordinates, `s = diag(I, -I)` and `Lambda`
/// the dual pairing.
pub fn build_euclidean(g: &LieAlgebra) -> Result<LegendrianSymmetricAlgebra> {
    let n = g.dim();
    let mut ad = Vec::with_capacity(2 * n);
    for i in 0..n {
        let a = g.ad_basis(i);
        ad.push(block_diag(&[a, &(-a.transpose())]));
    }
    for j in 0..n {
        // [f_j, e_i] = sum_l c[i][l][j] f_l, [f_j, f_k] = 0.
        let mut m = Mat::zeros(2 * n, 2 * n);
        for i in 0..n {
            for l in 0..n {
                m[(n + l, i)] = g.structure_constant(i, l, j);
            }
        }
        ad.push(m);
    }
    let mut labels = g.labels().to_vec();
    labels.extend(suffixed(g, "*"));
    let algebra = LieAlgebra::from_ad(labels, ad)?;
    let eye = Mat::identity(n, n);
    let s = block_diag(&[&eye, &(-&eye)]);
    let mut lambda = Mat::zeros(2 * n, 2 * n);
    lambda.view_mut((0, n), (n, n)).copy_from(&eye);
    lambda.view_mut((n, 0), (n, n)).copy_from(&eye);
    finish(algebra, s, lambda, None)
}

/// The compact model `g x g` with the factor swap and
/// `Lambda = blockdiag(B, -B) / 2`.
pub fn build_compact(g: &LieAlgebra, b: &BilinearForm) -> Result<LegendrianSymmetricAlgebra> {
    check_inner(g, b)?;
    let n = g.dim();
    let algebra = g
        .direct_sum(g)
        .with_labels([suffixed(g, "_1"), suffixed(g, "_2")].concat())?;
    let mut s = Mat::zeros(2 * n, 2 * n);
    for i in 0..n {
        s[(i, n + i)] = 1.0;
        s[(n + i, i)] = 1.0;
    }
    let lambda = block_diag(&[&(&b.matrix * 0.5), &(&b.matrix * -0.5)]);
    finish(algebra, s, lambda, Some(b.clone()))
}

/// The noncompact model: `g (x) C` as a real algebra with basis
/// `(e_i, i e_i)`, complex conjugation as `s`, and `Lambda = Im B^C`.
pub fn build_noncompact(g: &LieAlgebra, b: &BilinearForm) -> Result<LegendrianSymmetricAlgebra> {
    check_inner(g, b)?;
    let n = g.dim();
    let mut ad = Vec::with_capacity(2 * n);
    for i in 0..n {
        let a = g.ad_basis(i);
        ad.push(block_diag(&[a, a]));
    }
    for i in 0..n {
        let a = g.ad_basis(i);
        let mut m = Mat::zeros(2 * n, 2 * n);
        m.view_mut((n, 0), (n, n)).copy_from(a);
        m.view_mut((0, n), (n, n)).copy_from(&(-a));
        ad.push(m);
    }
    let mut labels = g.labels().to_vec();
    labels.extend(g.labels().iter().map(|l| format!("i{l}")));
    let algebra = LieAlgebra::from_ad(labels, ad)?;
    let eye = Mat::identity(n, n);
    let s = block_diag(&[&eye, &(-&eye)]);
    let mut lambda = Mat::zeros(2 * n, 2 * n);
    lambda.view_mut((0, n), (n, n)).copy_from(&b.matrix);
    lambda.view_mut((n, 0), (n, n)).copy_from(&b.matrix);
    finish(algebra, s, lambda, Some(b.clone()))
}
