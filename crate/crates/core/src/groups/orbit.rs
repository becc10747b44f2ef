// SPDX-License-Identifier: Apache-2.0

//! The orbit two-form on `P = H/G`, the kernel of `tau`, and minimal
//! degeneracy.

use crate::error::{Error, Result};
use crate::legendrian::CanonicalType;
use crate::linalg::{rank_threshold, max_abs, right_singular, Mat, Subspace, C64};
use crate::report::ResidualReport;

use super::{GroupPoint, GroupRealization};

/// Width, as a factor on either side of the rank threshold, of the band in
/// which a singular value makes a kernel dimension ambiguous.
const AMBIGUITY_BAND: f64 = 100.0;

/// `omega_O(xi_P, eta_P) = Lambda(Ad_h^-1 xi, pi Ad_h^-1 eta)` at the point
/// `p = hG` with representative `h`; `xi`, `eta` in base coordinates.
pub fn orbit_two_form(
    r: &GroupRealization,
    hpt: &GroupPoint,
    xi: &crate::linalg::Vector,
    eta: &crate::linalg::Vector,
) -> Result<f64> {
    let inv = r.adjoint_of(&r.inverse(hpt)?)?.matrix;
    let a = &inv * r.lift_g(xi);
    let b = r.pi_alg() * (&inv * r.lift_g(eta));
    Ok(a.dot(&(r.lambda() * b)))
}

/// Gram matrix of [`orbit_two_form`] on the base basis of `g`.
fn orbit_gram(r: &GroupRealization, ad_h_inv: &Mat) -> Mat {
    let lifted = ad_h_inv * r.g_lift_matrix();
    let projected = r.pi_alg() * &lifted;
    lifted.transpose() * r.lambda() * projected
}

/// Null space with a rank decision that refuses to guess: an error when a
/// singular value falls within [`AMBIGUITY_BAND`] of the threshold.
fn decisive_null_space(m: &Mat, scale: f64, what: &str) -> Result<Subspace> {
    let (sv, v) = right_singular(m);
    let top = sv.first().copied().unwrap_or(0.0);
    let threshold = rank_threshold(top, scale);
    for &s in &sv {
        if s > threshold / AMBIGUITY_BAND && s < threshold * AMBIGUITY_BAND {
            return Err(Error::AmbiguousRank {
                what: what.to_string(),
                value: s,
                threshold,
            });
        }
    }
    let rank = sv.iter().filter(|&&s| s > threshold).count();
    let n = m.ncols();
    Ok(Subspace::from_orthonormal(v.columns(rank, n - rank).into_owned()))
}

/// Kernel of `tau_p : g -> T*_p P`, as a subspace of `g` in base
/// coordinates: the left null space of `N[i][a] = Lambda(xi_i, Ad_h w_a)`
/// over a basis `w_a` of `p`.
pub fn kernel_tau(r: &GroupRealization, hpt: &GroupPoint) -> Result<Subspace> {
    let ad_h = r.adjoint_of(hpt)?.matrix;
    let p = r.ambient().sym().p().basis().clone();
    let n = r.g_lift_matrix().transpose() * r.lambda() * &ad_h * p;
    decisive_null_space(&n.transpose(), scale_of(&ad_h), "kernel of tau")
}

/// `k = sigma(h) h^-1`.
fn k_element(r: &GroupRealization, hpt: &GroupPoint) -> Result<Mat> {
    let k = r.multiply(&r.sigma_of(hpt)?, &r.inverse(hpt)?);
    Ok(r.adjoint_of(&k)?.matrix)
}

/// `ker(1 + Ad_k)` restricted to `g`.
pub fn kernel_plus_ad(r: &GroupRealization, hpt: &GroupPoint) -> Result<Subspace> {
    let ad_k = k_element(r, hpt)?;
    let lift = r.g_lift_matrix();
    let m = &lift + &ad_k * &lift;
    decisive_null_space(&m, scale_of(&ad_k), "ker(1 + Ad_k)")
}

/// `ker(1 - Ad_k)` restricted to `g`.
pub fn kernel_minus_ad(r: &GroupRealization, hpt: &GroupPoint) -> Result<Subspace> {
    let ad_k = k_element(r, hpt)?;
    let lift = r.g_lift_matrix();
    let m = &lift - &ad_k * &lift;
    decisive_null_space(&m, scale_of(&ad_k), "ker(1 - Ad_k)")
}

/// Stabilizer of `p = hG` in `g`: the `xi` with `pi Ad_h^-1 xi = 0`.
pub fn stabilizer(r: &GroupRealization, hpt: &GroupPoint) -> Result<Subspace> {
    let inv = r.adjoint_of(&r.inverse(hpt)?)?.matrix;
    let m = r.pi_alg() * &inv * r.g_lift_matrix();
    decisive_null_space(&m, scale_of(&inv), "stabilizer")
}

fn scale_of(m: &Mat) -> f64 {
    max_abs(m).max(1.0)
}

/// The explicit compact point `h = (diag(i, -i, 1, ..., 1), I)`.
pub fn explicit_compact_point(r: &GroupRealization) -> Result<GroupPoint> {
    let d = r.model().matrix_dim();
    let mut u = crate::linalg::CMat::identity(d, d);
    u[(0, 0)] = C64::new(0.0, 1.0);
    if d > 1 {
        u[(1, 1)] = C64::new(0.0, -1.0);
    }
    match r.kind() {
        CanonicalType::Compact => Ok(GroupPoint::Compact {
            g1: u,
            g2: crate::linalg::CMat::identity(d, d),
        }),
        other => Err(Error::WrongCase {
            expected: CanonicalType::Compact.name(),
            found: other.name(),
        }),
    }
}

/// Minimal degeneracy of the orbit form at `h`: `iota_xi omega = 0` exactly
/// when `xi_P = 0` or `xi` lies in `ker tau_p`.
///
/// * `kernel_g`: `null(M)` against `ker tau + stabilizer` inside `g`;
/// * `kernel_tangent`: both sides mapped to `T_p P` by `xi -> pi Ad_h^-1 xi`;
/// * `kernel_tau_vs_ad`: `ker tau` against `ker(1 + Ad_k)`, `k = sigma(h) h^-1`;
/// * `stabilizer_vs_ad`: the stabilizer against `ker(1 - Ad_k)`.
///
/// The first two are principal angles, reported as `pi/2` on dimension
/// mismatch; `*_dim` checks hold the dimension differences.
pub fn check_min_degeneracy(
    r: &GroupRealization,
    hpt: &GroupPoint,
    tol: f64,
) -> Result<ResidualReport> {
    let ad_h_inv = r.adjoint_of(&r.inverse(hpt)?)?.matrix;
    let gram = orbit_gram(r, &ad_h_inv);
    let null_m = decisive_null_space(&gram, scale_of(&ad_h_inv).powi(2), "orbit form")?;
    let ker_tau = kernel_tau(r, hpt)?;
    let stab = stabilizer(r, hpt)?;
    let predicted = ker_tau.sum(&stab);

    let to_tangent = r.pi_alg() * &ad_h_inv * r.g_lift_matrix();
    let scale = scale_of(&to_tangent);
    let k1 = Subspace::span_scaled(&(&to_tangent * null_m.basis()), scale);
    let k2 = Subspace::span_scaled(&(&to_tangent * ker_tau.basis()), scale);

    let mut report = ResidualReport::new();
    compare(&mut report, "kernel_g", &null_m, &predicted, tol);
    compare(&mut report, "kernel_tangent", &k1, &k2, tol);
    compare(&mut report, "kernel_tau_vs_ad", &ker_tau, &kernel_plus_ad(r, hpt)?, tol);
    compare(&mut report, "stabilizer_vs_ad", &stab, &kernel_minus_ad(r, hpt)?, tol);
    Ok(report)
}

fn compare(report: &mut ResidualReport, name: &str, a: &Subspace, b: &Subspace, tol: f64) {
    let dim_gap = a.dim().abs_diff(b.dim()) as f64;
    let angle = a
        .max_principal_angle(b)
        .unwrap_or(std::f64::consts::FRAC_PI_2);
    report.record_max(&format!("{name}_dim"), dim_gap, tol);
    report.record_max(name, angle, tol);
}

/// [`check_min_degeneracy`] at `n_samples` sampled points, aggregated by
/// maximum, together with the smallest and largest `dim ker tau` seen.
pub fn check_min_degeneracy_samples(
    r: &GroupRealization,
    n_samples: usize,
    seed: u64,
    tol: f64,
) -> Result<(ResidualReport, usize, usize)> {
    let mut report = ResidualReport::new();
    let (mut lo, mut hi) = (usize::MAX, 0);
    for i in 0..n_samples as u64 {
        let h = r.sample_with(&mut super::sample_rng(seed, i));
        let one = check_min_degeneracy(r, &h, tol)?;
        for c in &one.checks {
            report.record_max(&c.name, c.value, tol);
        }
        let d = kernel_tau(r, &h)?.dim();
        lo = lo.min(d);
        hi = hi.max(d);
    }
    Ok((report, lo.min(hi), hi))
}
