// SPDX-License-Identifier: Apache-2.0

//! Builtin algebras and their matrix models.

use super::LieAlgebra;
use crate::error::{Error, Result};
use crate::linalg::{max_abs, CMat, Mat, Vector, C64};

/// A real Lie algebra realized as the real span of complex matrices, with
/// structure constants computed from commutators.
#[derive(Clone, Debug)]
pub struct MatrixLieAlgebra {
    pub algebra: LieAlgebra,
    pub generators: Vec<CMat>,
    gram_inv: Mat,
}

impl MatrixLieAlgebra {
    /// Requires the generators to be real-linearly independent and closed
    /// under commutators.
    pub fn from_generators(labels: Vec<String>, generators: Vec<CMat>) -> Result<Self> {
        let n = generators.len();
        if n == 0 || labels.len() != n {
            return Err(Error::DimensionMismatch {
                expected: labels.len(),
                found: n,
            });
        }
        let gram = Mat::from_fn(n, n, |a, b| hs_inner(&generators[a], &generators[b]));
        let gram_inv = gram
            .try_inverse()
            .ok_or_else(|| Error::Format("matrix generators are linearly dependent".into()))?;
        let mut model = MatrixLieAlgebra {
            algebra: LieAlgebra::abelian(n),
            generators,
            gram_inv,
        };
        let mut ad = Vec::with_capacity(n);
        for i in 0..n {
            let mut m = Mat::zeros(n, n);
            for j in 0..n {
                let comm = commutator(&model.generators[i], &model.generators[j]);
                let (re, im) = model.coords(&comm);
                let fit = &comm - model.matrix_of_complex(&re, &im);
                let fit_res = fit.iter().map(|z| z.norm()).fold(0.0, f64::max);
                if fit_res > 1e-12 || max_abs(&Mat::from_column_slice(n, 1, im.as_slice())) > 1e-12 {
                    return Err(Error::Format(format!(
                        "generators not closed under commutators ({i}, {j}): residual {fit_res:e}"
                    )));
                }
                m.set_column(j, &re);
            }
            ad.push(m);
        }
        model.algebra = LieAlgebra::from_ad(labels, ad)?;
        Ok(model)
    }

    /// `su(2)` with `e_k = -i sigma_k / 2`, so that `[e_1, e_2] = e_3`.
    pub fn su2() -> Self {
        let i = C64::new(0.0, 1.0);
        let h = C64::new(0.5, 0.0);
        let sx = CMat::from_row_slice(2, 2, &[0.0.into(), 1.0.into(), 1.0.into(), 0.0.into()]);
        let sy = CMat::from_row_slice(2, 2, &[0.0.into(), -i, i, 0.0.into()]);
        let sz = CMat::from_row_slice(2, 2, &[1.0.into(), 0.0.into(), 0.0.into(), (-1.0).into()]);
        let gens = [sx, sy, sz].into_iter().map(|s| s * (-i * h)).collect();
        Self::from_generators(labels("e", 3), gens).expect("su(2) generators are valid")
    }

    /// `su(3)` with `e_a = -i lambda_a / 2` for the Gell-Mann matrices.
    pub fn su3() -> Self {
        let i = C64::new(0.0, 1.0);
        let r = |v: f64| C64::new(v, 0.0);
        let z = r(0.0);
        let o = r(1.0);
        let s3 = 1.0 / 3.0_f64.sqrt();
        let gell_mann = [
            [z, o, z, o, z, z, z, z, z],
            [z, -i, z, i, z, z, z, z, z],
            [o, z, z, z, -o, z, z, z, z],
            [z, z, o, z, z, z, o, z, z],
            [z, z, -i, z, z, z, i, z, z],
            [z, z, z, z, z, o, z, o, z],
            [z, z, z, z, z, -i, z, i, z],
            [r(s3), z, z, z, r(s3), z, z, z, r(-2.0 * s3)],
        ];
        let gens = gell_mann
            .iter()
            .map(|m| CMat::from_row_slice(3, 3, m) * (-i * 0.5))
            .collect();
        Self::from_generators(labels("e", 8), gens).expect("su(3) generators are valid")
    }

    /// `u(1)^n` as diagonal imaginary matrices.
    pub fn abelian(n: usize) -> Self {
        let gens = (0..n)
            .map(|k| {
                let mut m = CMat::zeros(n, n);
                m[(k, k)] = C64::new(0.0, 1.0);
                m
            })
            .collect();
        Self::from_generators(labels("t", n), gens).expect("diagonal generators are valid")
    }

    /// Block-diagonal model of the direct sum.
    pub fn direct_sum(&self, other: &MatrixLieAlgebra) -> Self {
        let (d1, d2) = (self.matrix_dim(), other.matrix_dim());
        let d = d1 + d2;
        let mut gens = Vec::new();
        for g in &self.generators {
            let mut m = CMat::zeros(d, d);
            m.view_mut((0, 0), (d1, d1)).copy_from(g);
            gens.push(m);
        }
        for g in &other.generators {
            let mut m = CMat::zeros(d, d);
            m.view_mut((d1, d1), (d2, d2)).copy_from(g);
            gens.push(m);
        }
        let labels = self
            .algebra
            .labels()
            .iter()
            .chain(other.algebra.labels())
            .cloned()
            .collect();
        Self::from_generators(labels, gens).expect("direct sum of valid models is valid")
    }

    pub fn builtin(name: &str) -> Result<Self> {
        let mut parts = name.split('+').map(str::trim);
        let first = Self::single(parts.next().unwrap_or(""))?;
        parts.try_fold(first, |acc, p| Ok(acc.direct_sum(&Self::single(p)?)))
    }

    fn single(name: &str) -> Result<Self> {
        match name {
            "su2" | "so3" => Ok(Self::su2()),
            "su3" => Ok(Self::su3()),
            "su2su2" => Ok(Self::su2().direct_sum(&Self::su2())),
            _ => match abelian_dim(name) {
                Some(n) => Ok(Self::abelian(n)),
                None => Err(Error::UnknownBuiltin(name.to_string())),
            },
        }
    }

    pub fn dim(&self) -> usize {
        self.generators.len()
    }

    /// Size of the matrices.
    pub fn matrix_dim(&self) -> usize {
        self.generators[0].nrows()
    }

    pub fn matrix_of(&self, x: &Vector) -> CMat {
        let d = self.matrix_dim();
        let mut m = CMat::zeros(d, d);
        for (xi, g) in x.iter().zip(&self.generators) {
            m += g * C64::new(*xi, 0.0);
        }
        m
    }

    /// `sum_a (x_a + i y_a) X_a`.
    pub fn matrix_of_complex(&self, x: &Vector, y: &Vector) -> CMat {
        let d = self.matrix_dim();
        let mut m = CMat::zeros(d, d);
        for ((xa, ya), g) in x.iter().zip(y.iter()).zip(&self.generators) {
            m += g * C64::new(*xa, *ya);
        }
        m
    }

    /// Least-squares complex coordinates `(re, im)` of `m` in the generators.
    pub fn coords(&self, m: &CMat) -> (Vector, Vector) {
        let n = self.dim();
        let proj: Vec<C64> = self
            .generators
            .iter()
            .map(|g| (g.adjoint() * m).trace())
            .collect();
        let re = Vector::from_fn(n, |a, _| proj[a].re);
        let im = Vector::from_fn(n, |a, _| proj[a].im);
        (&self.gram_inv * re, &self.gram_inv * im)
    }

    /// Matrix of `Ad_u` in generator coordinates, for `u` in the group.
    pub fn adjoint(&self, u: &CMat) -> Mat {
        let n = self.dim();
        let uinv = u.clone().try_inverse().expect("group element is invertible");
        let mut out = Mat::zeros(n, n);
        for (a, g) in self.generators.iter().enumerate() {
            let (re, _) = self.coords(&(u * g * &uinv));
            out.set_column(a, &re);
        }
        out
    }
}

/// Real part of the Hilbert-Schmidt inner product.
fn hs_inner(a: &CMat, b: &CMat) -> f64 {
    (a.adjoint() * b).trace().re
}

pub(crate) fn commutator(a: &CMat, b: &CMat) -> CMat {
    a * b - b * a
}

fn labels(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

fn abelian_dim(name: &str) -> Option<usize> {
    let rest = name.strip_prefix("r_").or_else(|| name.strip_prefix('r'))?;
    rest.parse().ok().filter(|&n| n > 0)
}

/// Looks up a builtin algebra by name. Names may be joined with `+` to form
/// direct sums, e.g. `su2+r1`.
pub fn builtin(name: &str) -> Result<LieAlgebra> {
    let mut parts = name.split('+').map(str::trim);
    let first = single(parts.next().unwrap_or(""))?;
    parts.try_fold(first, |acc, p| Ok(acc.direct_sum(&single(p)?)))
}

fn single(name: &str) -> Result<LieAlgebra> {
    match name {
        "su2" | "so3" => LieAlgebra::from_structure(labels("e", 3), levi_civita),
        "su2su2" => Ok(single("su2")?.direct_sum(&single("su2")?)),
        "su3" => Ok(MatrixLieAlgebra::su3().algebra),
        _ => match abelian_dim(name) {
            Some(n) => Ok(LieAlgebra::abelian(n)),
            None => Err(Error::UnknownBuiltin(name.to_string())),
        },
    }
}

fn levi_civita(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (1, 0, 2) | (2, 1, 0) | (0, 2, 1) => -1.0,
        _ => 0.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn su2_matrix_model_matches_epsilon_tensor() {
        let from_eps = builtin("su2").unwrap();
        let from_mats = MatrixLieAlgebra::su2().algebra;
        for i in 0..3 {
            assert!(max_abs(&(from_eps.ad_basis(i) - from_mats.ad_basis(i))) < 1e-15);
        }
    }

    #[test]
    fn su3_constants_are_normalized() {
        let l = builtin("su3").unwrap();
        let m = l.max_structure_constant();
        assert!(m <= 2.0 && m > 0.5, "{m}");
        // f_123 = 1 for the Gell-Mann basis.
        assert!((l.structure_constant(0, 1, 2) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn sums_and_aliases() {
        assert_eq!(builtin("so3").unwrap(), builtin("su2").unwrap());
        assert_eq!(builtin("su2+su2").unwrap(), builtin("su2su2").unwrap());
        assert_eq!(builtin("r_3").unwrap().dim(), 3);
        assert_eq!(builtin("su2+r1").unwrap().dim(), 4);
        assert!(matches!(builtin("e8"), Err(Error::UnknownBuiltin(_))));
        assert_eq!(MatrixLieAlgebra::builtin("su2+su3").unwrap().matrix_dim(), 5);
    }

    #[test]
    fn coords_roundtrip() {
        let m = MatrixLieAlgebra::su3();
        let x = Vector::from_fn(8, |i, _| (i as f64 * 0.37).sin());
        let y = Vector::from_fn(8, |i, _| (i as f64 * 0.91).cos());
        let (re, im) = m.coords(&m.matrix_of_complex(&x, &y));
        assert!((re - x).norm() < 1e-14 && (im - y).norm() < 1e-14);
    }
}
