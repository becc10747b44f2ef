// SPDX-License-Identifier: Apache-2.0

//! The operator `J` defined by `Lambda(J x, y) = B(x, y)` with `B = -kappa_h`,
//! its lemma suite, the spectral split of `J^2` on `g`, and the rescaling of
//! `Lambda` that normalizes that spectrum to `{+1, -1}`.

use crate::error::{Error, Hypothesis, Result};
use crate::lie::{BilinearForm, LinearOperator};
use crate::legendrian::LegendrianSymmetricAlgebra;
use crate::linalg::{
    max_abs, rank, reciprocal_condition, singular_values, symmetric_eigen, worst, Mat, Subspace,
};
use crate::report::ResidualReport;
use crate::symmetric::SymmetricLieAlgebra;
use crate::DEFAULT_TOL;

use super::ideals::{b_orthonormalize, ideal_residual};

/// Relative gap separating two eigenvalue clusters of `J^2`.
pub const CLUSTER_GAP: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub struct JOperator {
    pub matrix: LinearOperator,
    /// `B = -kappa_h`.
    pub b: BilinearForm,
}

/// Solves `Lambda J = B` for `B = -kappa_h`. Refuses a singular `Lambda`, a
/// degenerate Killing form and a non-orthogonal pair.
pub fn compute_j(l: &LegendrianSymmetricAlgebra) -> Result<JOperator> {
    let lambda = &l.lambda().matrix;
    let margin = reciprocal_condition(lambda);
    if !(margin > DEFAULT_TOL) {
        return Err(Error::SingularForm { margin });
    }
    let b = l.algebra().killing_form().scaled(-1.0);
    let n = l.dim();
    let r = rank(&b.matrix, 0.0);
    if r < n {
        return Err(Error::DegenerateKilling { rank: r, dim: n });
    }
    let orth = l.sym().is_orthogonal();
    if !orth.orthogonal {
        return Err(Error::Hypothesis {
            hypothesis: Hypothesis::Orthogonal,
            detail: format!(
                "-kappa_h on g has eigenvalues in [{:e}, {:e}]",
                orth.min_eigenvalue, orth.max_eigenvalue
            ),
        });
    }
    let j = lambda
        .clone()
        .lu()
        .solve(&b.matrix)
        .ok_or(Error::SingularForm { margin })?;
    Ok(JOperator {
        matrix: LinearOperator::new(j),
        b,
    })
}

/// Lemma suite for `J`: the defining relation, commutation with `ad`,
/// anticommutation with `s`, `Lambda`-self-adjointness, `J g in p` with full
/// rank, and `B`-self-adjointness of `J^2`.
pub fn verify_j_properties(
    jop: &JOperator,
    l: &LegendrianSymmetricAlgebra,
    tol: f64,
) -> ResidualReport {
    let j = &jop.matrix.matrix;
    let b = &jop.b.matrix;
    let lambda = &l.lambda().matrix;
    let s = &l.sym().s().matrix;
    let mut report = ResidualReport::new();
    report.residual(
        "defining",
        max_abs(&(j.transpose() * lambda - b)),
        tol,
    );
    let commute = l
        .algebra()
        .ad_matrices()
        .iter()
        .map(|a| max_abs(&(j * a - a * j)))
        .fold(0.0, worst);
    report.residual("commutes_ad", commute, tol);
    report.residual("anticommutes_s", max_abs(&(j * s + s * j)), tol);
    report.residual(
        "lambda_self_adjoint",
        max_abs(&(lambda * j - j.transpose() * lambda)),
        tol,
    );
    let gb = l.sym().g().basis();
    let jg = j * gb;
    report.residual("g_to_p", max_abs(&(l.sym().g_projector() * &jg)), tol);
    let sv = singular_values(&jg);
    let margin = match (sv.first(), sv.get(gb.ncols().saturating_sub(1))) {
        (Some(&hi), Some(&lo)) if hi > 0.0 => lo / hi,
        _ => 0.0,
    };
    report.margin("g_to_p_rank", margin, DEFAULT_TOL);
    let j2 = j * j;
    report.residual(
        "jsq_b_self_adjoint",
        max_abs(&(b * &j2 - j2.transpose() * b)),
        tol,
    );
    report
}

/// One eigenvalue of `J^2|g` with a `B`-orthonormal basis of its
/// eigenspace, in ambient coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenCluster {
    pub eigenvalue: f64,
    pub basis: Mat,
}

impl EigenCluster {
    pub fn multiplicity(&self) -> usize {
        self.basis.ncols()
    }

    pub fn subspace(&self) -> Subspace {
        Subspace::span(&self.basis)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Eigensplit {
    /// Ascending by eigenvalue.
    pub clusters: Vec<EigenCluster>,
    /// Near-threshold gaps, with their values.
    pub warnings: Vec<String>,
}

/// Eigen-decomposition of `J^2|g` in a `B`-orthonormal frame.
pub fn eigensplit_jsq(jop: &JOperator, sym: &SymmetricLieAlgebra) -> Result<Eigensplit> {
    let gb = b_orthonormalize(sym.g().basis(), &jop.b.matrix).ok_or_else(|| Error::Hypothesis {
        hypothesis: Hypothesis::Orthogonal,
        detail: "B is not positive definite on g".into(),
    })?;
    let j = &jop.matrix.matrix;
    let b = &jop.b.matrix;
    // In the B-orthonormal frame the matrix of J^2|g is symmetric.
    let a = gb.transpose() * b * j * j * &gb;
    let asym = max_abs(&(&a - a.transpose()));
    let scale = max_abs(&a).max(1.0);
    if asym > 1e-6 * scale {
        return Err(Error::ResidualTooLarge {
            what: "B-self-adjointness of J^2 on g".into(),
            residual: asym,
            tol: 1e-6 * scale,
        });
    }
    let (vals, vecs) = symmetric_eigen(&a);
    let (groups, warnings) = cluster(&vals, CLUSTER_GAP);
    let clusters = groups
        .into_iter()
        .map(|(lo, hi)| {
            let mean = vals[lo..hi].iter().sum::<f64>() / (hi - lo) as f64;
            EigenCluster {
                eigenvalue: mean,
                basis: &gb * vecs.columns(lo, hi - lo),
            }
        })
        .collect();
    Ok(Eigensplit { clusters, warnings })
}

/// Groups ascending values into `[lo, hi)` runs separated by gaps larger than
/// `rel` times the largest magnitude. Gaps within a factor 100 of the
/// threshold on either side are reported as ambiguous.
pub fn cluster(vals: &[f64], rel: f64) -> (Vec<(usize, usize)>, Vec<String>) {
    let scale = vals.iter().fold(0.0_f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
    let thr = rel * scale;
    let mut groups = Vec::new();
    let mut warnings = Vec::new();
    let mut start = 0;
    for k in 1..vals.len() {
        let gap = vals[k] - vals[k - 1];
        if gap > 1e-2 * thr && gap < 1e2 * thr {
            warnings.push(format!(
                "ambiguous eigenvalue gap {gap:e} between {:e} and {:e} (threshold {thr:e})",
                vals[k - 1],
                vals[k]
            ));
        }
        if gap > thr {
            groups.push((start, k));
            start = k;
        }
    }
    if !vals.is_empty() {
        groups.push((start, vals.len()));
    }
    (groups, warnings)
}

/// Per-cluster rescaling of `Lambda`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClusterScale {
    pub eigenvalue: f64,
    /// Factor applied to `Lambda` on the cluster's ideal.
    pub lambda_scale: f64,
    /// Resulting factor on `J`.
    pub j_scale: f64,
}

#[derive(Clone, Debug)]
pub struct Normalized {
    pub algebra: LegendrianSymmetricAlgebra,
    pub scales: Vec<ClusterScale>,
    pub ideal_residual: f64,
}

/// Multiplies `Lambda` by `sqrt|lambda|` on each ideal `g_lambda + J g_lambda`,
/// which divides `J` there by the same factor and sends `J^2` to `sign(lambda)`.
/// Zero clusters and the `Lambda`-orthogonal remainder are left untouched.
pub fn normalize_scaling(
    l: &LegendrianSymmetricAlgebra,
    split: &Eigensplit,
    jop: &JOperator,
    tol: f64,
) -> Result<Normalized> {
    let n = l.dim();
    let j = &jop.matrix.matrix;
    let lambda = &l.lambda().matrix;
    let top = split
        .clusters
        .iter()
        .fold(0.0_f64, |m, c| m.max(c.eigenvalue.abs()));
    let mut blocks: Vec<(Mat, f64)> = Vec::new();
    let mut scales = Vec::new();
    let mut ideal_res = 0.0_f64;
    for c in &split.clusters {
        if c.eigenvalue.abs() <= CLUSTER_GAP * top {
            continue;
        }
        let w = crate::linalg::hcat(&[&c.basis, &(j * &c.basis)]);
        let r = ideal_residual(l.algebra(), &w);
        let thr = tol * l.algebra().max_structure_constant().max(1.0);
        if !(r <= thr) {
            return Err(Error::NotAnIdeal {
                what: format!("J^2 eigenvalue {:e}", c.eigenvalue),
                residual: r,
            });
        }
        ideal_res = worst(ideal_res, r);
        let f = c.eigenvalue.abs().sqrt();
        scales.push(ClusterScale {
            eigenvalue: c.eigenvalue,
            lambda_scale: f,
            j_scale: 1.0 / f,
        });
        blocks.push((w, f));
    }
    let used: usize = blocks.iter().map(|(w, _)| w.ncols()).sum();
    if used < n {
        let all = crate::linalg::hcat(&blocks.iter().map(|(w, _)| w).collect::<Vec<_>>());
        let rest = if all.ncols() == 0 {
            Mat::identity(n, n)
        } else {
            Subspace::null_space(&(all.transpose() * lambda)).basis().clone()
        };
        blocks.push((rest, 1.0));
    }
    let w_all = crate::linalg::hcat(&blocks.iter().map(|(w, _)| w).collect::<Vec<_>>());
    let w_inv = w_all.clone().try_inverse().ok_or_else(|| Error::NotAnIdeal {
        what: "J^2 eigenspaces do not span h".into(),
        residual: f64::INFINITY,
    })?;
    let mut rescaled = Mat::zeros(n, n);
    let mut at = 0;
    for (w, f) in &blocks {
        let k = w.ncols();
        let proj = w * w_inv.rows(at, k);
        rescaled += proj.transpose() * lambda * &proj * *f;
        at += k;
    }
    let algebra = l.with_lambda(BilinearForm::symmetric_exact(rescaled))?;
    Ok(Normalized {
        algebra,
        scales,
        ideal_residual: ideal_res,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::legendrian::{build, build_euclidean, CanonicalType};
    use crate::lie::builtin;

    fn model(kind: CanonicalType, g: &str) -> LegendrianSymmetricAlgebra {
        build(kind, &builtin(g).unwrap(), None).unwrap()
    }

    #[test]
    fn compact_su2_j_is_block_diagonal() {
        let l = model(CanonicalType::Compact, "su2");
        let j = compute_j(&l).unwrap();
        let eye = Mat::identity(3, 3);
        let want = crate::linalg::block_diag(&[&(&eye * 2.0), &(&eye * -2.0)]);
        assert!(max_abs(&(&j.matrix.matrix - want)) < 1e-13);
        assert!(verify_j_properties(&j, &l, 1e-12).passed());
    }

    #[test]
    fn euclidean_killing_form_is_degenerate() {
        let l = build_euclidean(&builtin("su2").unwrap()).unwrap();
        assert!(matches!(
            compute_j(&l),
            Err(Error::DegenerateKilling { rank: 3, dim: 6 })
        ));
    }

    #[test]
    fn spectra_before_and_after_normalization() {
        for (kind, sign) in [(CanonicalType::Compact, 1.0), (CanonicalType::Noncompact, -1.0)] {
            let l = model(kind, "su2");
            let j = compute_j(&l).unwrap();
            let split = eigensplit_jsq(&j, l.sym()).unwrap();
            assert_eq!(split.clusters.len(), 1);
            assert_eq!(split.clusters[0].multiplicity(), 3);
            assert!((split.clusters[0].eigenvalue - 4.0 * sign).abs() < 1e-12);
            let norm = normalize_scaling(&l, &split, &j, 1e-9).unwrap();
            assert!((norm.scales[0].j_scale - 0.5).abs() < 1e-14);
            let j2 = compute_j(&norm.algebra).unwrap();
            let split2 = eigensplit_jsq(&j2, norm.algebra.sym()).unwrap();
            assert!((split2.clusters[0].eigenvalue - sign).abs() < 1e-12);
            let again = normalize_scaling(&norm.algebra, &split2, &j2, 1e-9).unwrap();
            assert!((again.scales[0].lambda_scale - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn corrupted_lambda_breaks_a_lemma() {
        let l = model(CanonicalType::Compact, "su2");
        let mut m = l.lambda().matrix.clone();
        m[(0, 1)] += 1e-3;
        m[(1, 0)] += 1e-3;
        let bad = l.with_lambda(BilinearForm::symmetric_exact(m)).unwrap();
        let j = compute_j(&bad).unwrap();
        assert!(verify_j_properties(&j, &bad, 1e-9).max_residual() > 1e-5);
    }

    #[test]
    fn clustering_reports_near_threshold_gaps() {
        let (groups, warnings) = cluster(&[-1.0, -1.0, 1.0, 1.0 + 1e-6], 1e-6);
        assert_eq!(groups, vec![(0, 2), (2, 4)]);
        assert_eq!(warnings.len(), 1);
        let (groups, warnings) = cluster(&[4.0, 4.0, 4.0], 1e-6);
        assert_eq!(groups, vec![(0, 3)]);
        assert!(warnings.is_empty());
    }
}
