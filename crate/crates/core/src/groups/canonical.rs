// SPDX-License-Identifier: Apache-2.0

//! Comparison of the forms built from `Lambda` with the classical moment
//! space forms, pushed through the quotient maps
//!
//! * `j_0(g, l) = l` onto `g*`;
//! * `j_+(g1, g2) = g1 g2^-1` onto `G`;
//! * `j_-(h) = h sigma(h)^-1 = h h^dagger` onto `P^C`.
//!
//! Under the evaluation conventions used here the forms on `G` and `P^C`
//! come out at half the classical normalization in `B`, while `g*` matches
//! exactly; the comparisons carry that factor explicitly.

use crate::error::{Error, Result};
use crate::legendrian::CanonicalType;
use crate::linalg::{worst, CMat, Mat, Vector, C64};
use crate::report::ResidualReport;

use super::forms::{beta_with, upsilon_eval};
use super::orbit::{kernel_tau, orbit_two_form};
use super::{cmax_abs, sample_rng, unit_vector, GroupPoint, GroupRealization, FRAMES_PER_SAMPLE};

/// Relative normalization of the Legendrian forms against the classical
/// ones on `G` and `P^C`.
pub const CLASSICAL_FACTOR: f64 = 0.5;

/// Cross-checks against the classical forms over `n_samples` points with
/// [`FRAMES_PER_SAMPLE`] frames each. Check names depend on the case:
///
/// * Euclidean: `tau_coadjoint`, `orbit_kks`, `xi_zero`, `kernel_tau_dim`;
/// * compact: `tau_amm`, `xi_amm`, `orbit_amm`, `kernel_tau_vs_amm`;
/// * noncompact: `membership`, `tau_imaginary`, `tau_pc`, `xi_pc`,
///   `kernel_tau_dim`.
pub fn cross_check_canonical(
    r: &GroupRealization,
    n_samples: usize,
    seed: u64,
    tol: f64,
) -> Result<ResidualReport> {
    let mut report = ResidualReport::new();
    for i in 0..n_samples as u64 {
        let mut rng = sample_rng(seed, i);
        let h = r.sample_with(&mut rng);
        let ad_h = r.adjoint_of(&h)?.matrix;
        let ctx = Context::new(r, &h)?;
        for _ in 0..FRAMES_PER_SAMPLE {
            let xi = unit_vector(&mut rng, r.base_dim());
            let eta = unit_vector(&mut rng, r.base_dim());
            let z: Vec<Vector> = (0..3).map(|_| unit_vector(&mut rng, r.dim())).collect();
            let beta = beta_with(r, &ad_h, &xi, &z[0]);
            let ups = upsilon_eval(r, &h, &z[0], &z[1], &z[2]);
            let omega = orbit_two_form(r, &h, &xi, &eta)?;
            ctx.compare(r, &mut report, tol, &xi, &eta, &z, beta, ups, omega);
        }
        match r.kind() {
            CanonicalType::Compact => {
                let angle = kernel_tau(r, &h)?
                    .max_principal_angle(&ctx.kernel_amm(r))
                    .unwrap_or(std::f64::consts::FRAC_PI_2);
                report.record_max("kernel_tau_vs_amm", angle, tol);
            }
            _ => {
                report.record_max("kernel_tau_dim", kernel_tau(r, &h)?.dim() as f64, tol);
            }
        }
    }
    Ok(report)
}

/// Per-point data of the quotient map.
struct Context {
    h: GroupPoint,
    h_matrix: CMat,
    b: Mat,
    /// Compact: `u = g1 g2^-1`; noncompact: `p = h h^dagger`.
    image: CMat,
    image_inv: CMat,
}

impl Context {
    fn new(r: &GroupRealization, h: &GroupPoint) -> Result<Self> {
        let (image, image_inv) = match h {
            GroupPoint::Compact { g1, g2 } => {
                let u = g1 * g2.clone().try_inverse().ok_or(Error::SingularElement)?;
                let inv = u.clone().try_inverse().ok_or(Error::SingularElement)?;
                (u, inv)
            }
            GroupPoint::Noncompact { h } => {
                let p = h * h.adjoint();
                let inv = p.clone().try_inverse().ok_or(Error::SingularElement)?;
                (p, inv)
            }
            GroupPoint::Euclidean { .. } => (CMat::zeros(0, 0), CMat::zeros(0, 0)),
        };
        Ok(Self {
            h: h.clone(),
            h_matrix: r.to_matrix(h),
            b: r.inner(),
            image,
            image_inv,
        })
    }

    fn b(&self, x: &Vector, y: &Vector) -> f64 {
        x.dot(&(&self.b * y))
    }

    /// `B^C` on complex coordinate pairs `(re, im)`.
    fn b_c(&self, z: &(Vector, Vector), w: &(Vector, Vector)) -> C64 {
        C64::new(
            self.b(&z.0, &w.0) - self.b(&z.1, &w.1),
            self.b(&z.0, &w.1) + self.b(&z.1, &w.0),
        )
    }

    /// Differential of the quotient map applied to the frame value `zeta`.
    fn push(&self, r: &GroupRealization, zeta: &Vector) -> CMat {
        let z = r.embed(zeta);
        match &self.h {
            GroupPoint::Compact { g1, g2 } => {
                let d = g1.nrows();
                let v1 = g1 * z.view((0, 0), (d, d));
                let v2 = g2 * z.view((d, d), (d, d));
                let g2_inv = g2.clone().try_inverse().expect("unitary");
                &v1 * &g2_inv - &self.image * &v2 * &g2_inv
            }
            GroupPoint::Noncompact { h } => {
                let dh = h * &z;
                &dh * h.adjoint() + h * dh.adjoint()
            }
            GroupPoint::Euclidean { .. } => &self.h_matrix * z,
        }
    }

    /// Left and right Maurer-Cartan values at the image, decoded.
    fn maurer_cartan(&self, r: &GroupRealization, zeta: &Vector) -> ((Vector, Vector), (Vector, Vector)) {
        let dv = self.push(r, zeta);
        let left = r.model().coords(&(&self.image_inv * &dv));
        let right = r.model().coords(&(&dv * &self.image_inv));
        (left, right)
    }

    /// `ker(1 + Ad_u)` in base coordinates, `u = j_+(h)`, from the
    /// adjoint action of the matrix group `G`.
    fn kernel_amm(&self, r: &GroupRealization) -> crate::linalg::Subspace {
        let n = r.base_dim();
        let m = Mat::identity(n, n) + r.model().adjoint(&self.image);
        crate::linalg::Subspace::null_space(&m)
    }

    #[allow(clippy::too_many_arguments)]
    fn compare(
        &self,
        r: &GroupRealization,
        report: &mut ResidualReport,
        tol: f64,
        xi: &Vector,
        eta: &Vector,
        z: &[Vector],
        beta: f64,
        ups: f64,
        omega: f64,
    ) {
        match r.kind() {
            CanonicalType::Euclidean => {
                let d = r.model().matrix_dim();
                let n = r.base_dim();
                let dv = self.push(r, &z[0]);
                let dl = Vector::from_fn(n, |k, _| dv[(d + k, d + n)].re);
                report.record_max("tau_coadjoint", (beta - dl.dot(xi)).abs(), tol);
                let GroupPoint::Euclidean { l, .. } = &self.h else {
                    unreachable!()
                };
                let kks = l.dot(&r.base().br(xi, eta));
                report.record_max("orbit_kks", (omega - kks).abs(), tol);
                report.record_max("xi_zero", ups.abs(), tol);
            }
            CanonicalType::Compact => {
                let (left, right) = self.maurer_cartan(r, &z[0]);
                let tau = 0.5 * self.b(&(&left.0 + &right.0), xi);
                report.record_max("tau_amm", (beta - CLASSICAL_FACTOR * tau).abs(), tol);
                let t: Vec<Vector> = z.iter().map(|v| self.maurer_cartan(r, v).0 .0).collect();
                let xi_amm = 0.5 * self.b(&t[0], &r.base().br(&t[1], &t[2]));
                report.record_max("xi_amm", (ups - CLASSICAL_FACTOR * xi_amm).abs(), tol);
                let ad_u = r.model().adjoint(&self.image);
                let ad_u_inv = r.model().adjoint(&self.image_inv);
                let w = 0.5 * self.b(&(&ad_u_inv * eta - &ad_u * eta), xi);
                report.record_max("orbit_amm", (omega - CLASSICAL_FACTOR * w).abs(), tol);
                let imag = worst(left.1.amax(), right.1.amax());
                report.record_max("maurer_cartan_real", imag, tol);
            }
            CanonicalType::Noncompact => {
                let d = self.image.nrows();
                let sigma_p = self.image.adjoint().try_inverse().expect("invertible");
                let membership = cmax_abs(&(sigma_p * &self.image - CMat::identity(d, d)));
                report.record_max("membership", membership, tol);
                let (left, right) = self.maurer_cartan(r, &z[0]);
                let sum = (&left.0 + &right.0, &left.1 + &right.1);
                let xi_c = (xi.clone(), Vector::zeros(xi.len()));
                let pairing = self.b_c(&sum, &xi_c);
                report.record_max("tau_imaginary", pairing.re.abs(), tol);
                let tau = pairing.im / 2.0;
                report.record_max("tau_pc", (beta - CLASSICAL_FACTOR * tau).abs(), tol);
                let t: Vec<(Vector, Vector)> = z.iter().map(|v| self.maurer_cartan(r, v).1).collect();
                let br = complex_bracket(r, &t[1], &t[2]);
                let xi_p = 0.5 * self.b_c(&t[0], &br).im;
                report.record_max("xi_pc", (ups - CLASSICAL_FACTOR * xi_p).abs(), tol);
            }
        }
    }
}

/// Bracket of `g^C` on coordinate pairs, computed from matrix commutators.
fn complex_bracket(r: &GroupRealization, a: &(Vector, Vector), b: &(Vector, Vector)) -> (Vector, Vector) {
    let ma = r.model().matrix_of_complex(&a.0, &a.1);
    let mb = r.model().matrix_of_complex(&b.0, &b.1);
    r.model().coords(&(&ma * &mb - &mb * &ma))
}
