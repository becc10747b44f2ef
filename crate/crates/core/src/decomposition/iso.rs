// SPDX-License-Identifier: Apache-2.0

//! Explicit isomorphisms from recovered components onto canonical models.

use crate::error::Result;
use crate::lie::{BilinearForm, LieAlgebra, LinearOperator};
use crate::legendrian::{build, CanonicalType, LegendrianSymmetricAlgebra};
use crate::linalg::{block_diag, hcat, left_inverse, max_abs, worst, Mat, Subspace};
use crate::report::ResidualReport;

use super::ideals::ideal_residual;

/// One summand of the decomposition, with its certified isomorphism.
#[derive(Clone, Debug)]
pub struct Component {
    pub kind: CanonicalType,
    pub g_part: Subspace,
    pub p_part: Subspace,
    pub h_part: Subspace,
    /// Ambient columns `[G | P]`; `iso_map` acts on coordinates in this basis.
    pub adapted_basis: Mat,
    /// The recovered compact algebra, in the coordinates of `G`.
    pub base: LieAlgebra,
    /// Inner product on `base` used by the canonical model (absent for the
    /// Euclidean type).
    pub inner: Option<BilinearForm>,
    pub canonical: LegendrianSymmetricAlgebra,
    pub iso_map: LinearOperator,
    pub iso_residual: f64,
    pub lambda_scale: f64,
    pub j_scale: f64,
    pub certificate: ResidualReport,
}

impl Component {
    pub fn dim(&self) -> usize {
        self.h_part.dim()
    }
}

/// Builds the isomorphism for the ideal with `g`-part `g_basis` and
/// `p`-part `p_basis` (for the compact and noncompact types `p_basis`
/// must be `J g_basis` for the normalized `J`):
///
/// * Euclidean: `(xi, v) -> (xi, Lambda(., v)|_g)`;
/// * compact: `(xi, J eta) -> (xi + eta, xi - eta)`;
/// * noncompact: `(xi, J eta) -> xi + i eta`.
///
/// The certificate compares against the canonical model built over the
/// recovered `g` with `B_rec = B_h|_g` and holds bracket preservation,
/// `s`-intertwining, `Lambda` matching, and the closure of the component.
pub fn build_isomorphism(
    kind: CanonicalType,
    l: &LegendrianSymmetricAlgebra,
    b_h: &Mat,
    g_basis: &Mat,
    p_basis: &Mat,
    tol: f64,
) -> Result<Component> {
    let m = g_basis.ncols();
    let w = hcat(&[g_basis, p_basis]);
    let (base, g_closure) = l.algebra().restrict(g_basis)?;
    let (adapted, h_closure) = l.algebra().restrict(&w)?;
    let w_inv = left_inverse(&w).ok_or(crate::Error::IllConditioned {
        condition: f64::INFINITY,
    })?;
    let s_c = &w_inv * &l.sym().s().matrix * &w;
    let lambda_c = w.transpose() * &l.lambda().matrix * &w;
    let eye = Mat::identity(m, m);

    let (inner, t) = match kind {
        CanonicalType::Euclidean => {
            let pairing = g_basis.transpose() * &l.lambda().matrix * p_basis;
            (None, block_diag(&[&eye, &pairing]))
        }
        CanonicalType::Compact => {
            let mut t = Mat::zeros(2 * m, 2 * m);
            t.view_mut((0, 0), (m, m)).copy_from(&eye);
            t.view_mut((0, m), (m, m)).copy_from(&eye);
            t.view_mut((m, 0), (m, m)).copy_from(&eye);
            t.view_mut((m, m), (m, m)).copy_from(&(-&eye));
            (Some(restricted_inner(b_h, g_basis)), t)
        }
        CanonicalType::Noncompact => (
            Some(restricted_inner(b_h, g_basis)),
            Mat::identity(2 * m, 2 * m),
        ),
    };
    let canonical = build(kind, &base, inner.as_ref())?;

    let mut cert = ResidualReport::new();
    let bracket = (0..2 * m)
        .map(|a| {
            let lhs = &t * adapted.ad_basis(a);
            let rhs = canonical.algebra().ad(&t.column(a).into_owned()) * &t;
            max_abs(&(lhs - rhs))
        })
        .fold(0.0, worst);
    cert.residual("bracket", bracket, tol);
    cert.residual(
        "s_intertwining",
        max_abs(&(&t * &s_c - &canonical.sym().s().matrix * &t)),
        tol,
    );
    cert.residual(
        "lambda_matching",
        max_abs(&(t.transpose() * &canonical.lambda().matrix * &t - &lambda_c)),
        tol,
    );
    cert.residual("g_closure", g_closure, tol);
    cert.residual("h_closure", h_closure, tol);
    cert.residual("ideal", ideal_residual(l.algebra(), &w), tol);
    let iso_residual = cert.max_residual();

    Ok(Component {
        kind,
        g_part: Subspace::span(g_basis),
        p_part: Subspace::span(p_basis),
        h_part: Subspace::span(&w),
        adapted_basis: w,
        base,
        inner,
        canonical,
        iso_map: LinearOperator::new(t),
        iso_residual,
        lambda_scale: 1.0,
        j_scale: 1.0,
        certificate: cert,
    })
}

fn restricted_inner(b_h: &Mat, g_basis: &Mat) -> BilinearForm {
    BilinearForm::symmetric_exact(g_basis.transpose() * b_h * g_basis)
}
