// SPDX-License-Identifier: Apache-2.0

//! Ideal tests and the splitting of a semisimple ideal into simple ones.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::lie::LieAlgebra;
use crate::linalg::{max_abs, symmetric_eigen, worst, Mat, Subspace, Vector};

use super::j::cluster;

/// Fixed seed for the generic elements used by [`split_simple_ideals`].
const SPLIT_SEED: u64 = 0x51_3d1e;

/// Relative eigenvalue threshold of the Gram matrix of the centroid system.
const CENTROID_REL: f64 = 1e-12;

/// Columns of `basis` re-expressed as a `B`-orthonormal basis of their span;
/// `None` when `B` is not positive definite there.
pub fn b_orthonormalize(basis: &Mat, b: &Mat) -> Option<Mat> {
    if basis.ncols() == 0 {
        return Some(basis.clone());
    }
    let gram = basis.transpose() * b * basis;
    let gram = (&gram + gram.transpose()) * 0.5;
    let chol = gram.cholesky()?;
    let l_inv_t = chol.l().transpose().try_inverse()?;
    Some(basis * l_inv_t)
}

/// Largest distance of a column of `vectors` from the span of `basis`.
pub fn span_residual(basis: &Mat, vectors: &Mat) -> f64 {
    let q = Subspace::span(basis);
    let qb = q.basis();
    max_abs(&(vectors - qb * (qb.transpose() * vectors)))
}

/// How far `span(w)` is from being an ideal of `algebra`: the largest
/// distance of `[e_i, w_a]` from `span(w)`.
pub fn ideal_residual(algebra: &LieAlgebra, w: &Mat) -> f64 {
    if w.ncols() == 0 {
        return 0.0;
    }
    let q = Subspace::span(w);
    let qb = q.basis();
    algebra
        .ad_matrices()
        .iter()
        .map(|a| {
            let img = a * qb;
            max_abs(&(&img - qb * (qb.transpose() * &img)))
        })
        .fold(0.0, worst)
}

/// Largest `|[x_a, y_b]|` over columns.
pub fn cross_bracket(algebra: &LieAlgebra, xs: &Mat, ys: &Mat) -> f64 {
    let mut res = 0.0_f64;
    for a in 0..xs.ncols() {
        let img = algebra.ad(&xs.column(a).into_owned()) * ys;
        res = worst(res, max_abs(&img));
    }
    res
}

/// Splits the semisimple subalgebra spanned by `basis` (ambient columns)
/// into its simple ideals, returned as `B`-orthonormal ambient bases.
///
/// The centroid (linear maps commuting with every `ad`) of a semisimple
/// algebra of compact type is spanned by the projectors onto its simple
/// ideals. It is computed as the commutant of two generic elements, which
/// generate the algebra. In a `B`-orthonormal frame a generic element of
/// the centroid is symmetric, and its eigenspaces are the simple ideals.
pub fn split_simple_ideals(algebra: &LieAlgebra, basis: &Mat, b: &Mat) -> Vec<Mat> {
    let m = basis.ncols();
    if m == 0 {
        return Vec::new();
    }
    if m == 1 {
        return vec![basis.clone()];
    }
    let Some(frame) = b_orthonormalize(basis, b) else {
        return vec![basis.clone()];
    };
    let Ok((sub, _)) = algebra.restrict(&frame) else {
        return vec![frame];
    };
    let mut rng = ChaCha8Rng::seed_from_u64(SPLIT_SEED);
    let mut generic = || Vector::from_fn(m, |_, _| rng.sample::<f64, _>(StandardNormal));
    let eye = Mat::identity(m, m);
    let mut stacked = Mat::zeros(2 * m * m, m * m);
    for k in 0..2 {
        let a = sub.ad(&generic());
        let block = a.transpose().kronecker(&eye) - eye.kronecker(&a);
        stacked.view_mut((k * m * m, 0), (m * m, m * m)).copy_from(&block);
    }
    // The system has m^2 unknowns, too many for a Jacobi SVD inside the
    // roundtrip budget. Its Gram matrix has a wide spectral gap between the
    // centroid (round-off) and the rest, so a symmetric eigensolver on it
    // with a squared threshold is reliable here.
    let gram = stacked.transpose() * &stacked;
    let (vals, vecs) = symmetric_eigen(&gram);
    let top = vals.last().copied().unwrap_or(0.0);
    let dim = vals.iter().take_while(|&&v| v <= CENTROID_REL * top).count();
    if dim <= 1 {
        return vec![frame];
    }
    let coeffs = Vector::from_fn(dim, |_, _| rng.sample::<f64, _>(StandardNormal));
    let t = Mat::from_column_slice(m, m, (vecs.columns(0, dim) * coeffs).as_slice());
    let (vals, vecs) = symmetric_eigen(&t);
    let (groups, _) = cluster(&vals, 1e-6);
    groups
        .into_iter()
        .map(|(lo, hi)| &frame * vecs.columns(lo, hi - lo))
        .collect()
}
