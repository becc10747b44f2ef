// SPDX-License-Identifier: Apache-2.0

//! Dense linear-algebra helpers shared by every module.
//!
//! Rank decisions all go through [`rank_threshold`]: a singular value counts
//! as zero when it is at most `RANK_REL_TOL` times the larger of the largest
//! singular value and a caller-supplied scale. The scale keeps the decision
//! meaningful for matrices that are pure round-off.

use nalgebra::{Complex, ComplexField, DMatrix, DVector, SymmetricEigen};

pub type Mat = DMatrix<f64>;
pub type Vector = DVector<f64>;
pub type C64 = Complex<f64>;
pub type CMat = DMatrix<C64>;

/// Relative threshold for all rank decisions.
pub const RANK_REL_TOL: f64 = 1e-8;

pub fn rank_threshold(largest_singular: f64, scale: f64) -> f64 {
    RANK_REL_TOL * largest_singular.max(scale)
}

/// Largest absolute entry.
pub fn max_abs(m: &Mat) -> f64 {
    m.iter().fold(0.0_f64, |acc, v| worst(acc, v.abs()))
}

pub fn max_abs_vec(v: &Vector) -> f64 {
    v.iter().fold(0.0_f64, |acc, x| worst(acc, x.abs()))
}

/// Maximum that propagates NaN, so a broken residual can never be masked.
pub fn worst(acc: f64, v: f64) -> f64 {
    if acc.is_nan() || v.is_nan() {
        f64::NAN
    } else {
        acc.max(v)
    }
}

/// Horizontal concatenation of column blocks with equal row counts.
pub fn hcat(blocks: &[&Mat]) -> Mat {
    let rows = blocks.first().map_or(0, |b| b.nrows());
    let cols: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = Mat::zeros(rows, cols);
    let mut at = 0;
    for b in blocks {
        assert_eq!(b.nrows(), rows, "hcat: row mismatch");
        out.columns_mut(at, b.ncols()).copy_from(b);
        at += b.ncols();
    }
    out
}

/// Block-diagonal matrix.
pub fn block_diag(blocks: &[&Mat]) -> Mat {
    let rows: usize = blocks.iter().map(|b| b.nrows()).sum();
    let cols: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = Mat::zeros(rows, cols);
    let (mut r, mut c) = (0, 0);
    for b in blocks {
        out.view_mut((r, c), (b.nrows(), b.ncols())).copy_from(b);
        r += b.nrows();
        c += b.ncols();
    }
    out
}

/// One-sided Jacobi SVD: returns `(sigma, U, V)` with `A V = U diag(sigma)`,
/// `V` orthogonal `n x n`, and the columns of `U` unit vectors (zero for
/// vanishing `sigma`). Order is unspecified.
///
/// Used instead of `nalgebra`'s bidiagonal SVD, whose output for
/// rank-deficient input can be far from a factorization of `A`.
fn jacobi_svd(a: &Mat) -> (Vec<f64>, Mat, Mat) {
    let (m, n) = a.shape();
    let mut u = a.clone();
    let mut v = Mat::identity(n, n);
    const MAX_SWEEPS: usize = 80;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let (alpha, beta, gamma) = {
                    let cp = u.column(p);
                    let cq = u.column(q);
                    (cp.norm_squared(), cq.norm_squared(), cp.dot(&cq))
                };
                if gamma == 0.0 || gamma.abs() <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate_columns(u.as_mut_slice(), m, p, q, c, s);
                rotate_columns(v.as_mut_slice(), n, p, q, c, s);
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sigma = Vec::with_capacity(n);
    for j in 0..n {
        let norm = u.column(j).norm();
        sigma.push(norm);
        if norm > 0.0 {
            u.column_mut(j).unscale_mut(norm);
        }
    }
    (sigma, u, v)
}

/// `(x_p, x_q) <- (c x_p - s x_q, s x_p + c x_q)` on columns of a
/// column-major buffer with `rows` rows.
fn rotate_columns(data: &mut [f64], rows: usize, p: usize, q: usize, c: f64, s: f64) {
    let (head, tail) = data.split_at_mut(q * rows);
    let xp = &mut head[p * rows..(p + 1) * rows];
    let xq = &mut tail[..rows];
    for (a, b) in xp.iter_mut().zip(xq.iter_mut()) {
        let (x, y) = (*a, *b);
        *a = c * x - s * y;
        *b = s * x + c * y;
    }
}

fn descending(sigma: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..sigma.len()).collect();
    order.sort_by(|&x, &y| sigma[y].total_cmp(&sigma[x]));
    order
}

fn reorder_columns(m: &Mat, order: &[usize]) -> Mat {
    let mut out = Mat::zeros(m.nrows(), order.len());
    for (dst, &src) in order.iter().enumerate() {
        out.set_column(dst, &m.column(src));
    }
    out
}

/// Singular values in descending order with a full orthogonal set of
/// `ncols` matching right singular vectors; entries past `min(nrows, ncols)`
/// are zero.
pub fn right_singular(a: &Mat) -> (Vec<f64>, Mat) {
    if a.ncols() == 0 {
        return (Vec::new(), Mat::zeros(0, 0));
    }
    let (sigma, _, v) = jacobi_svd(a);
    let order = descending(&sigma);
    (order.iter().map(|&i| sigma[i]).collect(), reorder_columns(&v, &order))
}

/// Singular values in descending order with a full orthogonal set of
/// `nrows` matching left singular vectors.
pub fn left_singular(a: &Mat) -> (Vec<f64>, Mat) {
    right_singular(&a.transpose())
}

/// Singular values, descending; `min(nrows, ncols)` of them.
pub fn singular_values(a: &Mat) -> Vec<f64> {
    let k = a.nrows().min(a.ncols());
    if k == 0 {
        return Vec::new();
    }
    let (mut sigma, _, _) = if a.nrows() >= a.ncols() {
        jacobi_svd(a)
    } else {
        jacobi_svd(&a.transpose())
    };
    sigma.sort_by(|x, y| y.total_cmp(x));
    sigma.truncate(k);
    sigma
}

/// Reciprocal 2-norm condition number; 0 for singular or empty input.
pub fn reciprocal_condition(a: &Mat) -> f64 {
    let sv = singular_values(a);
    match (sv.first(), sv.last()) {
        (Some(&hi), Some(&lo)) if hi > 0.0 => lo / hi,
        _ => 0.0,
    }
}

pub fn spectral_norm(a: &Mat) -> f64 {
    singular_values(a).first().copied().unwrap_or(0.0)
}

/// Numerical rank with the shared threshold.
pub fn rank(a: &Mat, scale: f64) -> usize {
    let sv = singular_values(a);
    let thr = rank_threshold(sv.first().copied().unwrap_or(0.0), scale);
    sv.iter().filter(|&&s| s > thr).count()
}

/// Moore-Penrose left inverse of a full-column-rank matrix.
pub fn left_inverse(w: &Mat) -> Option<Mat> {
    let gram = w.transpose() * w;
    gram.try_inverse().map(|g| g * w.transpose())
}

/// Eigen-decomposition of the symmetric part of `m`, eigenvalues ascending.
pub fn symmetric_eigen(m: &Mat) -> (Vec<f64>, Mat) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), Mat::zeros(0, 0));
    }
    let sym = (m + m.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| eig.eigenvalues[x].total_cmp(&eig.eigenvalues[y]));
    let vals = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vecs = Mat::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vecs.set_column(dst, &eig.eigenvectors.column(src));
    }
    (vals, vecs)
}

/// Linear subspace of `R^n` stored as an orthonormal column basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace {
    basis: Mat,
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Subspace {
            basis: Mat::zeros(ambient_dim, 0),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Subspace {
            basis: Mat::identity(ambient_dim, ambient_dim),
        }
    }

    /// Column span of `columns`.
    pub fn span(columns: &Mat) -> Self {
        Self::span_scaled(columns, 0.0)
    }

    /// Column span with an absolute scale floor for the rank decision.
    pub fn span_scaled(columns: &Mat, scale: f64) -> Self {
        let n = columns.nrows();
        if columns.ncols() == 0 {
            return Self::zero(n);
        }
        let (sv, u) = left_singular(columns);
        let thr = rank_threshold(sv[0], scale);
        let k = sv.iter().filter(|&&s| s > thr).count();
        Subspace {
            basis: u.columns(0, k).into_owned(),
        }
    }

    /// Null space `{x : a x = 0}`.
    pub fn null_space(a: &Mat) -> Self {
        Self::null_space_scaled(a, 0.0)
    }

    pub fn null_space_scaled(a: &Mat, scale: f64) -> Self {
        let c = a.ncols();
        if a.nrows() == 0 {
            return Self::full(c);
        }
        let (sv, v) = right_singular(a);
        let thr = rank_threshold(sv.first().copied().unwrap_or(0.0), scale);
        let r = sv.iter().filter(|&&s| s > thr).count();
        Subspace {
            basis: v.columns(r, c - r).into_owned(),
        }
    }

    pub fn from_orthonormal(basis: Mat) -> Self {
        Subspace { basis }
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn basis(&self) -> &Mat {
        &self.basis
    }

    /// Orthogonal projector onto the subspace.
    pub fn projector(&self) -> Mat {
        &self.basis * self.basis.transpose()
    }

    /// Euclidean distance of `v` from the subspace.
    pub fn distance(&self, v: &Vector) -> f64 {
        let proj = &self.basis * (self.basis.transpose() * v);
        (v - proj).norm()
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        Subspace::span(&hcat(&[&self.basis, &other.basis]))
    }

    pub fn intersection_dim(&self, other: &Subspace) -> usize {
        let joint = self.sum(other).dim();
        (self.dim() + other.dim()).saturating_sub(joint)
    }

    /// Largest principal angle between equal-dimensional subspaces; `None`
    /// when the dimensions differ. Computed from its sine, the norm of the
    /// component of `other` orthogonal to `self`, which stays accurate for
    /// small angles where the arccosine of the cosines does not.
    pub fn max_principal_angle(&self, other: &Subspace) -> Option<f64> {
        if self.dim() != other.dim() || self.ambient_dim() != other.ambient_dim() {
            return None;
        }
        if self.dim() == 0 {
            return Some(0.0);
        }
        let q = &self.basis;
        let residual = &other.basis - q * (q.transpose() * &other.basis);
        Some(spectral_norm(&residual).clamp(0.0, 1.0).asin())
    }
}

/// Matrix exponential by scaling and squaring around a Taylor core.
///
/// The input is scaled by `2^-s` until its 1-norm is at most 1/2, where a
/// degree-18 Taylor polynomial is accurate to far below double precision;
/// the result is then squared `s` times.
pub fn expm<T>(a: &DMatrix<T>) -> DMatrix<T>
where
    T: ComplexField<RealField = f64> + Copy,
{
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "expm requires a square matrix");
    if n == 0 {
        return a.clone();
    }
    let norm1 = (0..n)
        .map(|j| a.column(j).iter().map(|x| x.modulus()).sum::<f64>())
        .fold(0.0, f64::max);
    let mut squarings = 0u32;
    if norm1 > 0.5 {
        squarings = (norm1 / 0.5).log2().ceil() as u32;
    }
    let scale = T::from_real(0.5_f64.powi(squarings as i32));
    let scaled = a.map(|x| x * scale);

    const DEGREE: usize = 18;
    let eye = DMatrix::<T>::identity(n, n);
    // Horner: I + A(I + A/2(I + A/3(...)))
    let mut acc = eye.clone();
    for k in (1..=DEGREE).rev() {
        let inv_k = T::from_real(1.0 / k as f64);
        acc = &eye + (&scaled * acc).map(|x| x * inv_k);
    }
    for _ in 0..squarings {
        acc = &acc * &acc;
    }
    acc
}
