// SPDX-License-Identifier: Apache-2.0

//! The one-forms `beta(xi)`, the three-form `Upsilon`, and the identity
//! suites relating them.

use crate::error::Result;
use crate::linalg::{Mat, Vector};
use crate::report::ResidualReport;

use super::{basis_vector, sample_rng, unit_vector, GroupPoint, GroupRealization, FRAMES_PER_SAMPLE};

/// `beta(xi)_h(zeta) = Lambda(xi, Ad_h pi zeta)` for `xi` in base
/// coordinates of `g` and `zeta` the frame value of a tangent vector at `h`.
pub fn beta_eval(r: &GroupRealization, xi: &Vector, hpt: &GroupPoint, zeta: &Vector) -> Result<f64> {
    let ad = r.adjoint_of(hpt)?.matrix;
    Ok(beta_with(r, &ad, xi, zeta))
}

pub(crate) fn beta_with(r: &GroupRealization, ad_h: &Mat, xi: &Vector, zeta: &Vector) -> f64 {
    lam(r, &r.lift_g(xi), &(ad_h * (r.pi_alg() * zeta)))
}

/// `Upsilon(zeta_1, zeta_2, zeta_3) = 2 Lambda(pi zeta_1, [pi zeta_2, pi zeta_3])`.
///
/// `Upsilon` is left-invariant, so on left-invariant frames its value does
/// not depend on the point; `_hpt` is accepted for symmetry with the other
/// evaluations.
pub fn upsilon_eval(
    r: &GroupRealization,
    _hpt: &GroupPoint,
    z1: &Vector,
    z2: &Vector,
    z3: &Vector,
) -> f64 {
    upsilon(r, z1, z2, z3)
}

fn upsilon(r: &GroupRealization, z1: &Vector, z2: &Vector, z3: &Vector) -> f64 {
    let pi = r.pi_alg();
    let alg = r.ambient().algebra();
    2.0 * lam(r, &(pi * z1), &alg.br(&(pi * z2), &(pi * z3)))
}

/// `Upsilon` evaluated in the right trivialization at `h`:
/// `2 Lambda(Ad_h pi zeta_1, [Ad_h pi zeta_2, Ad_h pi zeta_3])`. Equal to
/// [`upsilon_eval`] exactly when `Lambda` is `Ad_h`-invariant.
pub fn upsilon_transported(
    r: &GroupRealization,
    hpt: &GroupPoint,
    z1: &Vector,
    z2: &Vector,
    z3: &Vector,
) -> Result<f64> {
    let ad = r.adjoint_of(hpt)?.matrix;
    let pi = r.pi_alg();
    let alg = r.ambient().algebra();
    let a = &ad * (pi * z1);
    let b = &ad * (pi * z2);
    let c = &ad * (pi * z3);
    Ok(2.0 * lam(r, &a, &alg.br(&b, &c)))
}

/// `d beta(xi)(zeta_1, zeta_2) = Lambda(xi, Ad_h 2[pi zeta_1, pi zeta_2])`.
pub fn dbeta_eval(
    r: &GroupRealization,
    xi: &Vector,
    hpt: &GroupPoint,
    z1: &Vector,
    z2: &Vector,
) -> Result<f64> {
    let ad = r.adjoint_of(hpt)?.matrix;
    Ok(dbeta_with(r, &ad, xi, z1, z2))
}

fn dbeta_with(r: &GroupRealization, ad_h: &Mat, xi: &Vector, z1: &Vector, z2: &Vector) -> f64 {
    let pi = r.pi_alg();
    let br = r.ambient().algebra().br(&(pi * z1), &(pi * z2));
    lam(r, &r.lift_g(xi), &(ad_h * br * 2.0))
}

/// `d beta(xi)` from `X beta(Y) - Y beta(X) - beta([X, Y])` on the
/// left-invariant fields with values `zeta_1, zeta_2`, where
/// `X beta(xi)(Y) = Lambda(xi, Ad_h [zeta_1, pi zeta_2])`.
pub fn dbeta_three_term(
    r: &GroupRealization,
    xi: &Vector,
    hpt: &GroupPoint,
    z1: &Vector,
    z2: &Vector,
) -> Result<f64> {
    let ad = r.adjoint_of(hpt)?.matrix;
    Ok(dbeta_three_term_with(r, &ad, xi, z1, z2))
}

fn dbeta_three_term_with(
    r: &GroupRealization,
    ad_h: &Mat,
    xi: &Vector,
    z1: &Vector,
    z2: &Vector,
) -> f64 {
    let pi = r.pi_alg();
    let alg = r.ambient().algebra();
    let x = r.lift_g(xi);
    let derivative = |a: &Vector, b: &Vector| lam(r, &x, &(ad_h * alg.br(a, &(pi * b))));
    derivative(z1, z2) - derivative(z2, z1) - beta_with(r, ad_h, xi, &alg.br(z1, z2))
}

fn lam(r: &GroupRealization, x: &Vector, y: &Vector) -> f64 {
    x.dot(&(r.lambda() * y))
}

/// Right-basicness, left-equivariance, and `beta(xi)(xi_L) = 0` over
/// `n_samples` points with [`FRAMES_PER_SAMPLE`] frames each:
///
/// * `basic_right`: `beta(xi)_(hg)(Ad_g^-1 zeta) = beta(xi)_h(zeta)`;
/// * `horizontal`: `beta(xi)_h(zeta) = 0` for `zeta` in `g`;
/// * `equivariant_left`: `beta(xi)_(g^-1 h)(zeta) = beta(Ad_g xi)_h(zeta)`;
/// * `contraction_xi_l`: `beta(xi)_h(Ad_h^-1 xi) = 0`.
pub fn check_prop_tau(
    r: &GroupRealization,
    n_samples: usize,
    seed: u64,
    tol: f64,
) -> Result<ResidualReport> {
    let mut report = ResidualReport::new();
    for name in ["basic_right", "horizontal", "equivariant_left", "contraction_xi_l"] {
        report.residual(name, 0.0, tol);
    }
    let n = r.base_dim();
    for i in 0..n_samples as u64 {
        let mut rng = sample_rng(seed, i);
        let h = r.sample_with(&mut rng);
        let g = r.sample_subgroup(&mut rng);
        let ad_h = r.adjoint_of(&h)?.matrix;
        let ad_g = r.adjoint_of(&g)?.matrix;
        let g_inv = r.inverse(&g)?;
        let ad_g_inv = r.adjoint_of(&g_inv)?.matrix;
        let ad_hg = r.adjoint_of(&r.multiply(&h, &g))?.matrix;
        let ad_ginv_h = r.adjoint_of(&r.multiply(&g_inv, &h))?.matrix;
        let ad_h_inv = r.adjoint_of(&r.inverse(&h)?)?.matrix;
        for _ in 0..FRAMES_PER_SAMPLE {
            let xi = unit_vector(&mut rng, n);
            let zeta = unit_vector(&mut rng, r.dim());
            let eta = r.lift_g(&unit_vector(&mut rng, n));
            let base = beta_with(r, &ad_h, &xi, &zeta);

            let moved = beta_with(r, &ad_hg, &xi, &(&ad_g_inv * &zeta));
            report.record_max("basic_right", (moved - base).abs(), tol);
            report.record_max("horizontal", beta_with(r, &ad_h, &xi, &eta).abs(), tol);

            let xi_g = r.project_g(&(&ad_g * r.lift_g(&xi)));
            let lhs = beta_with(r, &ad_ginv_h, &xi, &zeta);
            let rhs = beta_with(r, &ad_h, &xi_g, &zeta);
            report.record_max("equivariant_left", (lhs - rhs).abs(), tol);

            let xi_l = &ad_h_inv * r.lift_g(&xi);
            report.record_max("contraction_xi_l", beta_with(r, &ad_h, &xi, &xi_l).abs(), tol);
        }
    }
    Ok(report)
}

/// Structure equations, closedness of `Upsilon`, and
/// `iota(xi_L) Upsilon = d beta(xi)` over `n_samples` points with
/// [`FRAMES_PER_SAMPLE`] random frames each:
///
/// * `structure_dgamma`: `gamma[z1, z2] = [gamma z1, gamma z2] + [pi z1, pi z2]`;
/// * `structure_dpi`: `pi[z1, z2] = [gamma z1, pi z2] - [gamma z2, pi z1]`;
/// * `d_upsilon`: the left-invariant four-argument exterior derivative;
/// * `contraction_upsilon`: `Upsilon(Ad_h^-1 xi, z1, z2) = d beta(xi)(z1, z2)`;
/// * `dbeta_routes`: closed form of `d beta` against the three-term formula;
/// * `upsilon_point_spread`: left- against right-trivialized evaluation.
pub fn check_prop_xi(
    r: &GroupRealization,
    n_samples: usize,
    seed: u64,
    tol: f64,
) -> Result<ResidualReport> {
    let mut report = ResidualReport::new();
    for name in [
        "structure_dgamma",
        "structure_dpi",
        "d_upsilon",
        "contraction_upsilon",
        "dbeta_routes",
        "upsilon_point_spread",
    ] {
        report.residual(name, 0.0, tol);
    }
    let alg = r.ambient().algebra();
    let (gamma, pi) = (r.gamma_alg(), r.pi_alg());
    let dim = r.dim();
    for i in 0..n_samples as u64 {
        let mut rng = sample_rng(seed, i);
        let h = r.sample_with(&mut rng);
        let ad_h = r.adjoint_of(&h)?.matrix;
        let ad_h_inv = r.adjoint_of(&r.inverse(&h)?)?.matrix;
        let alg_ad = |a: &Vector| alg.ad(a);
        for _ in 0..FRAMES_PER_SAMPLE {
            let z: Vec<Vector> = (0..4).map(|_| unit_vector(&mut rng, dim)).collect();
            let xi = unit_vector(&mut rng, r.base_dim());
            let (g1, g2) = (gamma * &z[0], gamma * &z[1]);
            let (p1, p2) = (pi * &z[0], pi * &z[1]);
            let bracket = alg.br(&z[0], &z[1]);

            let dgamma = gamma * &bracket - alg.br(&g1, &g2) - alg.br(&p1, &p2);
            report.record_max("structure_dgamma", dgamma.amax(), tol);
            let dpi = pi * &bracket - alg.br(&g1, &p2) + alg.br(&g2, &p1);
            report.record_max("structure_dpi", dpi.amax(), tol);

            let mut d_ups = 0.0;
            for a in 0..4 {
                for b in a + 1..4 {
                    let rest: Vec<usize> = (0..4).filter(|&c| c != a && c != b).collect();
                    let sign = if (a + b) % 2 == 0 { 1.0 } else { -1.0 };
                    let ab = alg_ad(&z[a]) * &z[b];
                    d_ups += sign * upsilon(r, &ab, &z[rest[0]], &z[rest[1]]);
                }
            }
            report.record_max("d_upsilon", d_ups.abs(), tol);

            let xi_l = &ad_h_inv * r.lift_g(&xi);
            let contracted = upsilon(r, &xi_l, &z[0], &z[1]);
            let db = dbeta_with(r, &ad_h, &xi, &z[0], &z[1]);
            report.record_max("contraction_upsilon", (contracted - db).abs(), tol);
            let db3 = dbeta_three_term_with(r, &ad_h, &xi, &z[0], &z[1]);
            report.record_max("dbeta_routes", (db - db3).abs(), tol);

            let left = upsilon(r, &z[0], &z[1], &z[2]);
            let right = upsilon_transported(r, &h, &z[0], &z[1], &z[2])?;
            report.record_max("upsilon_point_spread", (left - right).abs(), tol);
        }
    }
    Ok(report)
}

/// Brute-force alternation defect of `Upsilon` on a basis: the largest
/// `|Upsilon(e_a, e_b, e_c) - sgn(perm) Upsilon(perm)|`.
pub fn upsilon_alternation_defect(r: &GroupRealization) -> f64 {
    let dim = r.dim();
    let e = |a| basis_vector(dim, a);
    let perms: [([usize; 3], f64); 6] = [
        ([0, 1, 2], 1.0),
        ([1, 2, 0], 1.0),
        ([2, 0, 1], 1.0),
        ([1, 0, 2], -1.0),
        ([0, 2, 1], -1.0),
        ([2, 1, 0], -1.0),
    ];
    let mut worst_defect = 0.0_f64;
    for a in 0..dim {
        for b in 0..dim {
            for c in 0..dim {
                let args = [e(a), e(b), e(c)];
                let v = upsilon(r, &args[0], &args[1], &args[2]);
                for (p, sgn) in &perms {
                    let w = upsilon(r, &args[p[0]], &args[p[1]], &args[p[2]]);
                    worst_defect = worst_defect.max((v - sgn * w).abs());
                }
            }
        }
    }
    worst_defect
}
