// SPDX-License-Identifier: Apache-2.0

//! Matrix-group realizations of the three canonical cases and numerical
//! verification of the moment-space forms on them.
//!
//! All forms are evaluated on left-invariant frames: a tangent vector at
//! `h` is represented by its Maurer-Cartan value `zeta = h^-1 dh` in `h`
//! coordinates. Exterior derivatives then reduce to algebra through
//! `d alpha(X, Y) = X alpha(Y) - Y alpha(X) - alpha([X, Y])` and
//! `d/dt Ad_{h exp(t zeta)} = Ad_h ad_zeta`.

mod canonical;
mod forms;
mod orbit;

pub use canonical::cross_check_canonical;
pub use forms::{
    beta_eval, check_prop_tau, check_prop_xi, dbeta_eval, dbeta_three_term, upsilon_alternation_defect,
    upsilon_eval,
    upsilon_transported,
};
pub use orbit::{
    check_min_degeneracy, check_min_degeneracy_samples, explicit_compact_point, kernel_minus_ad,
    kernel_plus_ad, kernel_tau, orbit_two_form, stabilizer,
};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::legendrian::{build, CanonicalType, LegendrianSymmetricAlgebra};
use crate::lie::{BilinearForm, LieAlgebra, LinearOperator, MatrixLieAlgebra};
use crate::linalg::{expm, max_abs, worst, CMat, Mat, Vector, C64};
use crate::report::ResidualReport;
use crate::symmetric::SymmetricLieAlgebra;

/// Radius bound on the exponents of sampled points.
pub const SAMPLE_RADIUS: f64 = 2.0;

/// Random frames drawn per sampled point by the identity suites.
pub const FRAMES_PER_SAMPLE: usize = 10;

/// An element of the group `H` of one of the three cases.
#[derive(Clone, Debug, PartialEq)]
pub enum GroupPoint {
    /// `(g, l)` in `G x| g*` with `l` in dual coordinates.
    Euclidean { g: CMat, l: Vector },
    /// `(g1, g2)` in `G x G`.
    Compact { g1: CMat, g2: CMat },
    /// `h` in the complexification `G^C`.
    Noncompact { h: CMat },
}

/// A sampled point together with a list of left-invariant frame directions
/// and any scalars evaluated on them.
#[derive(Clone, Debug)]
pub struct FormSample {
    pub point: GroupPoint,
    pub frame: Vec<Vector>,
    pub values: Vec<f64>,
}

/// A faithful matrix model of `H` for one case, built over a matrix model
/// of the compact algebra `g`.
///
/// The embedding of `h` into matrices is
///
/// * compact: `(x1, x2) -> blockdiag(X(x1), X(x2))`;
/// * noncompact: `(x, y) -> X(x) + i X(y)`;
/// * Euclidean: `(x, lambda) -> blockdiag(X(x), [[-ad_x^T, lambda], [0, 0]])`,
///
/// and group elements are the corresponding products of exponentials, with
/// `(g, l) -> blockdiag(g, [[Ad_g^-T, l], [0, 1]])` in the Euclidean case.
#[derive(Clone, Debug)]
pub struct GroupRealization {
    kind: CanonicalType,
    model: MatrixLieAlgebra,
    ambient: LegendrianSymmetricAlgebra,
    pi: Mat,
    gamma: Mat,
}

impl GroupRealization {
    /// Realization over `model` with the default inner product `-Killing`.
    pub fn new(kind: CanonicalType, model: MatrixLieAlgebra) -> Result<Self> {
        let ambient = build(kind, &model.algebra, None)?;
        Ok(Self::from_parts(kind, model, ambient))
    }

    pub fn builtin(kind: CanonicalType, name: &str) -> Result<Self> {
        Self::new(kind, MatrixLieAlgebra::builtin(name)?)
    }

    fn from_parts(
        kind: CanonicalType,
        model: MatrixLieAlgebra,
        ambient: LegendrianSymmetricAlgebra,
    ) -> Self {
        let s = &ambient.sym().s().matrix;
        let eye = Mat::identity(s.nrows(), s.nrows());
        let pi = (&eye - s) * 0.5;
        let gamma = (&eye + s) * 0.5;
        Self {
            kind,
            model,
            ambient,
            pi,
            gamma,
        }
    }

    /// The same realization with `Lambda` replaced without validation, for
    /// sensitivity runs against corrupted forms.
    pub fn with_lambda_unchecked(&self, lambda: Mat) -> Result<Self> {
        let ambient = LegendrianSymmetricAlgebra::new_unchecked(
            self.ambient.sym().clone(),
            BilinearForm::general(lambda),
            self.ambient.inner().cloned(),
        )?;
        Ok(Self::from_parts(self.kind, self.model.clone(), ambient))
    }

    /// The same realization with the involution replaced without validation.
    pub fn with_involution_unchecked(&self, s: Mat) -> Result<Self> {
        let sym = SymmetricLieAlgebra::from_parts_unchecked(
            self.ambient.algebra().clone(),
            LinearOperator::new(s),
        );
        let ambient = LegendrianSymmetricAlgebra::new_unchecked(
            sym,
            self.ambient.lambda().clone(),
            self.ambient.inner().cloned(),
        )?;
        Ok(Self::from_parts(self.kind, self.model.clone(), ambient))
    }

    pub fn kind(&self) -> CanonicalType {
        self.kind
    }

    pub fn model(&self) -> &MatrixLieAlgebra {
        &self.model
    }

    /// The compact algebra `g`.
    pub fn base(&self) -> &LieAlgebra {
        &self.model.algebra
    }

    /// The Legendrian symmetric algebra `h`.
    pub fn ambient(&self) -> &LegendrianSymmetricAlgebra {
        &self.ambient
    }

    pub fn lambda(&self) -> &Mat {
        &self.ambient.lambda().matrix
    }

    /// Inner product `B` on `g`; for the Euclidean case, `-Killing` of `g`.
    pub fn inner(&self) -> Mat {
        match self.ambient.inner() {
            Some(b) => b.matrix.clone(),
            None => -&self.base().killing_form().matrix,
        }
    }

    /// `dim g`.
    pub fn base_dim(&self) -> usize {
        self.model.dim()
    }

    /// `dim h`.
    pub fn dim(&self) -> usize {
        self.ambient.dim()
    }

    /// Size of the faithful matrices.
    pub fn matrix_dim(&self) -> usize {
        let d = self.model.matrix_dim();
        match self.kind {
            CanonicalType::Compact => 2 * d,
            CanonicalType::Noncompact => d,
            CanonicalType::Euclidean => d + self.base_dim() + 1,
        }
    }

    /// `pi = (1 - s) / 2`, the projection onto `p` along `g`.
    pub fn pi_alg(&self) -> &Mat {
        &self.pi
    }

    /// `(1 + s) / 2`, the projection onto `g` along `p`.
    pub fn gamma_alg(&self) -> &Mat {
        &self.gamma
    }

    /// `h` coordinates of the element of `g` with base coordinates `x`.
    pub fn lift_g(&self, x: &Vector) -> Vector {
        let n = self.base_dim();
        let mut v = Vector::zeros(2 * n);
        v.rows_mut(0, n).copy_from(x);
        if self.kind == CanonicalType::Compact {
            v.rows_mut(n, n).copy_from(x);
        }
        v
    }

    /// Base coordinates of an element of `g` given in `h` coordinates.
    pub fn project_g(&self, v: &Vector) -> Vector {
        let g = &self.gamma * v;
        g.rows(0, self.base_dim()).into_owned()
    }

    /// Columns `lift_g(e_i)`.
    pub fn g_lift_matrix(&self) -> Mat {
        let n = self.base_dim();
        let mut m = Mat::zeros(2 * n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
            if self.kind == CanonicalType::Compact {
                m[(n + i, i)] = 1.0;
            }
        }
        m
    }

    /// The matrix of `zeta` in the faithful model.
    pub fn embed(&self, zeta: &Vector) -> CMat {
        let n = self.base_dim();
        let d = self.model.matrix_dim();
        let x = zeta.rows(0, n).into_owned();
        let y = zeta.rows(n, n).into_owned();
        match self.kind {
            CanonicalType::Compact => {
                let mut m = CMat::zeros(2 * d, 2 * d);
                m.view_mut((0, 0), (d, d)).copy_from(&self.model.matrix_of(&x));
                m.view_mut((d, d), (d, d)).copy_from(&self.model.matrix_of(&y));
                m
            }
            CanonicalType::Noncompact => self.model.matrix_of_complex(&x, &y),
            CanonicalType::Euclidean => {
                let mut m = CMat::zeros(d + n + 1, d + n + 1);
                m.view_mut((0, 0), (d, d)).copy_from(&self.model.matrix_of(&x));
                let coad = -self.base().ad(&x).transpose();
                m.view_mut((d, d), (n, n)).copy_from(&to_complex(&coad));
                for k in 0..n {
                    m[(d + k, d + n)] = C64::new(y[k], 0.0);
                }
                m
            }
        }
    }

    /// Inverse of [`embed`](Self::embed) on its image (least squares).
    pub fn decode(&self, m: &CMat) -> Vector {
        let n = self.base_dim();
        let d = self.model.matrix_dim();
        let mut v = Vector::zeros(2 * n);
        match self.kind {
            CanonicalType::Compact => {
                let (x1, _) = self.model.coords(&m.view((0, 0), (d, d)).into_owned());
                let (x2, _) = self.model.coords(&m.view((d, d), (d, d)).into_owned());
                v.rows_mut(0, n).copy_from(&x1);
                v.rows_mut(n, n).copy_from(&x2);
            }
            CanonicalType::Noncompact => {
                let (x, y) = self.model.coords(m);
                v.rows_mut(0, n).copy_from(&x);
                v.rows_mut(n, n).copy_from(&y);
            }
            CanonicalType::Euclidean => {
                let (x, _) = self.model.coords(&m.view((0, 0), (d, d)).into_owned());
                v.rows_mut(0, n).copy_from(&x);
                for k in 0..n {
                    v[n + k] = m[(d + k, d + n)].re;
                }
            }
        }
        v
    }

    /// The faithful matrix of a point.
    pub fn to_matrix(&self, pt: &GroupPoint) -> CMat {
        match pt {
            GroupPoint::Compact { g1, g2 } => {
                let d = g1.nrows();
                let mut m = CMat::zeros(2 * d, 2 * d);
                m.view_mut((0, 0), (d, d)).copy_from(g1);
                m.view_mut((d, d), (d, d)).copy_from(g2);
                m
            }
            GroupPoint::Noncompact { h } => h.clone(),
            GroupPoint::Euclidean { g, l } => {
                let d = g.nrows();
                let n = l.len();
                let ad = self.model.adjoint(g);
                let coad = ad
                    .try_inverse()
                    .expect("adjoint of a group element is invertible")
                    .transpose();
                let mut m = CMat::zeros(d + n + 1, d + n + 1);
                m.view_mut((0, 0), (d, d)).copy_from(g);
                m.view_mut((d, d), (n, n)).copy_from(&to_complex(&coad));
                for k in 0..n {
                    m[(d + k, d + n)] = C64::new(l[k], 0.0);
                }
                m[(d + n, d + n)] = C64::new(1.0, 0.0);
                m
            }
        }
    }

    /// The point with faithful matrix `m`.
    pub fn from_matrix(&self, m: &CMat) -> GroupPoint {
        let d = self.model.matrix_dim();
        match self.kind {
            CanonicalType::Compact => GroupPoint::Compact {
                g1: m.view((0, 0), (d, d)).into_owned(),
                g2: m.view((d, d), (d, d)).into_owned(),
            },
            CanonicalType::Noncompact => GroupPoint::Noncompact { h: m.clone() },
            CanonicalType::Euclidean => {
                let n = self.base_dim();
                GroupPoint::Euclidean {
                    g: m.view((0, 0), (d, d)).into_owned(),
                    l: Vector::from_fn(n, |k, _| m[(d + k, d + n)].re),
                }
            }
        }
    }

    pub fn identity(&self) -> GroupPoint {
        let d = self.matrix_dim();
        self.from_matrix(&CMat::identity(d, d))
    }

    pub fn exp(&self, zeta: &Vector) -> GroupPoint {
        self.from_matrix(&expm(&self.embed(zeta)))
    }

    pub fn multiply(&self, a: &GroupPoint, b: &GroupPoint) -> GroupPoint {
        self.from_matrix(&(self.to_matrix(a) * self.to_matrix(b)))
    }

    pub fn inverse(&self, a: &GroupPoint) -> Result<GroupPoint> {
        let inv = self
            .to_matrix(a)
            .try_inverse()
            .ok_or(Error::SingularElement)?;
        Ok(self.from_matrix(&inv))
    }

    /// The involution `sigma` of `H` integrating `s`: `(g, l) -> (g, -l)`,
    /// `(g1, g2) -> (g2, g1)`, `h -> (h^dagger)^-1`.
    pub fn sigma_of(&self, pt: &GroupPoint) -> Result<GroupPoint> {
        Ok(match pt {
            GroupPoint::Euclidean { g, l } => GroupPoint::Euclidean {
                g: g.clone(),
                l: -l,
            },
            GroupPoint::Compact { g1, g2 } => GroupPoint::Compact {
                g1: g2.clone(),
                g2: g1.clone(),
            },
            GroupPoint::Noncompact { h } => GroupPoint::Noncompact {
                h: h.adjoint().try_inverse().ok_or(Error::SingularElement)?,
            },
        })
    }

    /// The differential of `sigma` at the identity, applied to matrices of
    /// the embedded algebra and decoded.
    pub fn d_sigma(&self, zeta: &Vector) -> Vector {
        let m = self.embed(zeta);
        let image = match self.kind {
            CanonicalType::Noncompact => -m.adjoint(),
            CanonicalType::Compact => {
                let d = self.model.matrix_dim();
                let mut out = CMat::zeros(2 * d, 2 * d);
                out.view_mut((0, 0), (d, d))
                    .copy_from(&m.view((d, d), (d, d)));
                out.view_mut((d, d), (d, d))
                    .copy_from(&m.view((0, 0), (d, d)));
                out
            }
            CanonicalType::Euclidean => {
                let last = m.ncols() - 1;
                let mut out = m.clone();
                for r in 0..last {
                    out[(r, last)] = -out[(r, last)];
                }
                out
            }
        };
        self.decode(&image)
    }

    /// `Ad_h` on `h`. Compact and noncompact: conjugation pulled back through
    /// the embedding. Euclidean: the closed formula
    /// `Ad_(g,l)(x, lambda) = (Ad_g x, Ad*_g lambda - ad*_(Ad_g x) l)`.
    pub fn adjoint_of(&self, pt: &GroupPoint) -> Result<LinearOperator> {
        match pt {
            GroupPoint::Euclidean { g, l } => Ok(LinearOperator::new(self.euclidean_adjoint(g, l)?)),
            _ => self.adjoint_by_conjugation(pt).map(LinearOperator::new),
        }
    }

    /// `Ad_h` computed as `zeta -> decode(H embed(zeta) H^-1)` for every case.
    pub fn adjoint_by_conjugation(&self, pt: &GroupPoint) -> Result<Mat> {
        let h = self.to_matrix(pt);
        let h_inv = h.clone().try_inverse().ok_or(Error::SingularElement)?;
        let dim = self.dim();
        let mut out = Mat::zeros(dim, dim);
        for a in 0..dim {
            let e = Vector::from_fn(dim, |i, _| if i == a { 1.0 } else { 0.0 });
            let col = self.decode(&(&h * self.embed(&e) * &h_inv));
            out.set_column(a, &col);
        }
        Ok(out)
    }

    fn euclidean_adjoint(&self, g: &CMat, l: &Vector) -> Result<Mat> {
        let n = self.base_dim();
        let ad_g = self.model.adjoint(g);
        let coad_g = ad_g
            .clone()
            .try_inverse()
            .ok_or(Error::SingularElement)?
            .transpose();
        // -ad*_y l = ad_y^T l, and (ad_y^T l)_j = -sum_k l_k (ad_{e_j})_{k m} y_m.
        let mut c = Mat::zeros(n, n);
        for j in 0..n {
            let row = -(l.transpose() * self.base().ad_basis(j));
            c.set_row(j, &row);
        }
        let mut out = Mat::zeros(2 * n, 2 * n);
        out.view_mut((0, 0), (n, n)).copy_from(&ad_g);
        out.view_mut((n, 0), (n, n)).copy_from(&(c * &ad_g));
        out.view_mut((n, n), (n, n)).copy_from(&coad_g);
        Ok(out)
    }

    /// Departure of a point from the model's defining constraints: unitarity
    /// of the compact factors, and `det = 1` when the generators are
    /// traceless.
    pub fn point_residual(&self, pt: &GroupPoint) -> f64 {
        let unitary = |u: &CMat| {
            let d = u.nrows();
            cmax_abs(&(u.adjoint() * u - CMat::identity(d, d)))
        };
        let traceless = self
            .model
            .generators
            .iter()
            .all(|x| x.trace().norm() < 1e-14);
        let unimodular = |u: &CMat| {
            if traceless {
                (u.determinant() - C64::new(1.0, 0.0)).norm()
            } else {
                0.0
            }
        };
        match pt {
            GroupPoint::Compact { g1, g2 } => [unitary(g1), unitary(g2), unimodular(g1), unimodular(g2)]
                .into_iter()
                .fold(0.0, worst),
            GroupPoint::Euclidean { g, .. } => worst(unitary(g), unimodular(g)),
            GroupPoint::Noncompact { h } => unimodular(h),
        }
    }

    /// A pseudorandom point: a product of one to three exponentials of
    /// elements of `h` with norm at most [`SAMPLE_RADIUS`].
    pub fn sample_point(&self, seed: u64) -> GroupPoint {
        self.sample_with(&mut sample_rng(seed, 0))
    }

    pub(crate) fn sample_with(&self, rng: &mut ChaCha8Rng) -> GroupPoint {
        let factors = rng.random_range(1..=3);
        let mut m = CMat::identity(self.matrix_dim(), self.matrix_dim());
        for _ in 0..factors {
            let zeta = random_ball(rng, self.dim(), SAMPLE_RADIUS);
            m *= expm(&self.embed(&zeta));
        }
        self.from_matrix(&m)
    }

    /// A pseudorandom element of the subgroup `G`.
    pub(crate) fn sample_subgroup(&self, rng: &mut ChaCha8Rng) -> GroupPoint {
        let x = random_ball(rng, self.base_dim(), SAMPLE_RADIUS);
        self.exp(&self.lift_g(&x))
    }

    /// Point `index` of the sample stream `seed` with `frames` unit frame
    /// directions in `h`.
    pub fn form_sample(&self, seed: u64, index: u64, frames: usize) -> FormSample {
        let mut rng = sample_rng(seed, index);
        let point = self.sample_with(&mut rng);
        let frame = (0..frames).map(|_| unit_vector(&mut rng, self.dim())).collect();
        FormSample {
            point,
            frame,
            values: Vec::new(),
        }
    }

    /// Residuals of the realization itself over `n_samples` points: the
    /// embedding is a monomorphism, `sigma` is an involutive automorphism
    /// with differential `s`, sampled points satisfy the model constraints,
    /// `Ad` is a homomorphism into the automorphisms of `h`, and the closed
    /// Euclidean `Ad` formula agrees with conjugation.
    pub fn check_realization(&self, n_samples: usize, seed: u64, tol: f64) -> Result<ResidualReport> {
        let mut report = ResidualReport::new();
        let dim = self.dim();
        let alg = self.ambient.algebra();
        let mut embed_res = 0.0_f64;
        let mut dsigma_res = 0.0_f64;
        for a in 0..dim {
            let ea = basis_vector(dim, a);
            let ma = self.embed(&ea);
            for b in 0..dim {
                let eb = basis_vector(dim, b);
                let comm = &ma * self.embed(&eb) - self.embed(&eb) * &ma;
                let br = self.embed(&alg.basis_bracket(a, b));
                embed_res = worst(embed_res, cmax_abs(&(comm - br)));
            }
            let roundtrip = (self.decode(&ma) - &ea).amax();
            embed_res = worst(embed_res, roundtrip);
            let s_col = self.ambient.sym().s().matrix.column(a).into_owned();
            dsigma_res = worst(dsigma_res, (self.d_sigma(&ea) - s_col).amax());
        }
        report.residual("embed_monomorphism", embed_res, tol);
        report.residual("d_sigma_equals_s", dsigma_res, tol);
        for i in 0..n_samples as u64 {
            let mut rng = sample_rng(seed, i);
            let h1 = self.sample_with(&mut rng);
            let h2 = self.sample_with(&mut rng);
            let m1 = self.to_matrix(&h1);
            report.record_max("point_constraints", self.point_residual(&h1), tol);
            let ss = self.to_matrix(&self.sigma_of(&self.sigma_of(&h1)?)?);
            report.record_max("sigma_involutive", cmax_abs(&(ss - &m1)), tol);
            let h12 = self.multiply(&h1, &h2);
            let lhs = self.to_matrix(&self.sigma_of(&h12)?);
            let rhs = self.to_matrix(&self.multiply(&self.sigma_of(&h1)?, &self.sigma_of(&h2)?));
            report.record_max("sigma_homomorphism", cmax_abs(&(lhs - rhs)), tol);
            let ad1 = self.adjoint_of(&h1)?.matrix;
            let ad2 = self.adjoint_of(&h2)?.matrix;
            let ad12 = self.adjoint_of(&h12)?.matrix;
            let scale = 1.0 + max_abs(&ad1) * max_abs(&ad2);
            report.record_max("ad_homomorphism", max_abs(&(ad12 - &ad1 * &ad2)) / scale, tol);
            report.record_max(
                "ad_automorphism",
                automorphism_defect(alg, &ad1) / (1.0 + max_abs(&ad1).powi(2)),
                tol,
            );
            let conj = self.adjoint_by_conjugation(&h1)?;
            report.record_max("ad_formula", max_abs(&(conj - &ad1)) / (1.0 + max_abs(&ad1)), tol);
        }
        Ok(report)
    }
}

/// `max_ab |A [e_a, e_b] - [A e_a, A e_b]|`.
pub(crate) fn automorphism_defect(alg: &LieAlgebra, a: &Mat) -> f64 {
    let dim = alg.dim();
    let mut res = 0.0_f64;
    for i in 0..dim {
        let ai = a.column(i).into_owned();
        let lhs = a * alg.ad_basis(i);
        let rhs = alg.ad(&ai) * a;
        res = worst(res, max_abs(&(lhs - rhs)));
    }
    res
}

/// Independent stream `index` of the generator seeded by `seed`, so that
/// every sample is a pure function of `(seed, index)`.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub(crate) fn unit_vector(rng: &mut ChaCha8Rng, n: usize) -> Vector {
    loop {
        let v = Vector::from_fn(n, |_, _| rng.sample::<f64, _>(StandardNormal));
        let norm = v.norm();
        if norm > 1e-6 {
            return v / norm;
        }
    }
}

/// Uniform radius in `[0, radius)` along a uniform direction.
pub(crate) fn random_ball(rng: &mut ChaCha8Rng, n: usize, radius: f64) -> Vector {
    let r: f64 = rng.random_range(0.0..radius);
    unit_vector(rng, n) * r
}

pub(crate) fn basis_vector(n: usize, a: usize) -> Vector {
    Vector::from_fn(n, |i, _| if i == a { 1.0 } else { 0.0 })
}

pub(crate) fn to_complex(m: &Mat) -> CMat {
    m.map(|x| C64::new(x, 0.0))
}

pub(crate) fn cmax_abs(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, worst)
}
