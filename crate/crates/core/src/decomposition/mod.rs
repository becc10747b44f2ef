// SPDX-License-Identifier: Apache-2.0

//! Canonical decomposition of an effective, orthogonal Legendrian symmetric
//! Lie algebra into Euclidean, compact and noncompact ideals.
//!
//! Pipeline: hypothesis checks; structural split of the Euclidean part
//! (the radical of `kappa_h`); `J` on the complement; eigensplit of `J^2|g`;
//! rescaling of `Lambda`; splitting into simple ideals; isomorphisms onto the
//! canonical models.

mod ideals;
mod iso;
mod j;

pub use ideals::{
    b_orthonormalize, cross_bracket, ideal_residual, span_residual, split_simple_ideals,
};
pub use iso::{build_isomorphism, Component};
pub use j::{
    cluster, compute_j, eigensplit_jsq, normalize_scaling, verify_j_properties, ClusterScale,
    EigenCluster, Eigensplit, JOperator, Normalized, CLUSTER_GAP,
};

use crate::error::{Error, Hypothesis, Result};
use crate::lie::{BilinearForm, LinearOperator};
use crate::legendrian::{CanonicalType, LegendrianSymmetricAlgebra};
use crate::linalg::{block_diag, hcat, max_abs, worst, Mat, Subspace};
use crate::report::ResidualReport;
use crate::symmetric::SymmetricLieAlgebra;

/// Default certification tolerance of [`decompose`].
pub const DECOMPOSE_TOL: f64 = 1e-8;

/// The six pieces `g_0, g_+, g_-, p_0, p_+, p_-` as ambient subspaces.
#[derive(Clone, Debug)]
pub struct Pieces {
    pub g0: Subspace,
    pub gp: Subspace,
    pub gm: Subspace,
    pub p0: Subspace,
    pub pp: Subspace,
    pub pm: Subspace,
}

impl Pieces {
    pub fn dims(&self) -> [usize; 6] {
        [
            self.g0.dim(),
            self.gp.dim(),
            self.gm.dim(),
            self.p0.dim(),
            self.pp.dim(),
            self.pm.dim(),
        ]
    }
}

#[derive(Clone, Debug)]
pub struct DecompositionResult {
    /// Sorted by type (Euclidean, compact, noncompact), then dimension.
    pub components: Vec<Component>,
    pub pieces: Pieces,
    /// `Lambda` after the per-ideal rescaling.
    pub rescaled_lambda: BilinearForm,
    /// Eigenvalues of `J^2|g` before rescaling, one per cluster.
    pub eigenvalues: Vec<f64>,
    pub scales: Vec<ClusterScale>,
    pub report: ResidualReport,
    pub warnings: Vec<String>,
}

impl DecompositionResult {
    /// The `(type, dim)` multiset, sorted.
    pub fn signature(&self) -> Vec<(CanonicalType, usize)> {
        self.components.iter().map(|c| (c.kind, c.dim())).collect()
    }

    pub fn passed(&self) -> bool {
        self.report.passed()
    }
}

/// The structural Euclidean part `g0 + p0` of `h` and the rest `g' + p'`.
struct EuclideanSplit {
    g0: Mat,
    p0: Mat,
    g_rest: Mat,
    p_rest: Mat,
    report: ResidualReport,
}

/// Splits off `h_0 = g_0 + p_0` where `p_0` is the radical of `kappa_h`,
/// `g'` is the centralizer of `p_0` in `g`, `g_0` its `B`-orthocomplement
/// in `g`, and `p' = {v in p : Lambda(v, g_0) = 0}`.
fn euclidean_split(l: &LegendrianSymmetricAlgebra, b_h: &Mat, tol: f64) -> Result<EuclideanSplit> {
    let alg = l.algebra();
    let lambda = &l.lambda().matrix;
    let gb = l.sym().g().basis();
    let pb = l.sym().p().basis();
    let radical = Subspace::null_space_scaled(b_h, max_abs(b_h));
    let r = radical.basis().clone();
    let mut report = ResidualReport::new();
    if r.ncols() == 0 {
        return Ok(EuclideanSplit {
            g0: Mat::zeros(l.dim(), 0),
            p0: r,
            g_rest: gb.clone(),
            p_rest: pb.clone(),
            report,
        });
    }
    report.residual(
        "radical_in_p",
        max_abs(&(l.sym().g_projector() * &r)),
        tol,
    );
    report.residual("radical_abelian", cross_bracket(alg, &r, &r), tol);
    report.residual(
        "radical_isotropic",
        max_abs(&(r.transpose() * lambda * &r)),
        tol,
    );

    // Centralizer of the radical inside g: coefficients c with [G c, r_b] = 0.
    let mut stacked = Mat::zeros(l.dim() * r.ncols(), gb.ncols());
    for b in 0..r.ncols() {
        let block = alg.ad(&r.column(b).into_owned()) * gb;
        stacked
            .view_mut((b * l.dim(), 0), (l.dim(), gb.ncols()))
            .copy_from(&block);
    }
    let scale = max_abs(&stacked);
    let g_rest = gb * Subspace::null_space_scaled(&stacked, scale).basis();
    let g0 = gb * Subspace::null_space(&(g_rest.transpose() * b_h * gb)).basis();
    if g0.ncols() != r.ncols() {
        return Err(Error::Hypothesis {
            hypothesis: Hypothesis::Legendrian,
            detail: format!(
                "radical of kappa_h has dimension {} but pairs with a {}-dimensional part of g",
                r.ncols(),
                g0.ncols()
            ),
        });
    }
    let p_rest = if g0.ncols() == 0 {
        pb.clone()
    } else {
        pb * Subspace::null_space(&(g0.transpose() * lambda * pb)).basis()
    };
    let h0 = hcat(&[&g0, &r]);
    let h_rest = hcat(&[&g_rest, &p_rest]);
    report.residual("h0_ideal", ideal_residual(alg, &h0), tol);
    report.residual("complement_ideal", ideal_residual(alg, &h_rest), tol);
    report.residual("h0_commutes", cross_bracket(alg, &h0, &h_rest), tol);
    report.residual(
        "lambda_orthogonal",
        max_abs(&(h0.transpose() * lambda * &h_rest)),
        tol,
    );
    Ok(EuclideanSplit {
        g0,
        p0: r,
        g_rest,
        p_rest,
        report,
    })
}

/// The complement `h' = g' + p'` in the adapted coordinates `[G' | P']`.
fn restrict_to(
    l: &LegendrianSymmetricAlgebra,
    w: &Mat,
    dim_g: usize,
) -> Result<(LegendrianSymmetricAlgebra, f64)> {
    let (alg, closure) = l.algebra().restrict(w)?;
    let n = w.ncols();
    let mut s = Mat::identity(n, n);
    for k in dim_g..n {
        s[(k, k)] = -1.0;
    }
    let sym = SymmetricLieAlgebra::from_parts_unchecked(alg, LinearOperator::new(s));
    let lambda = BilinearForm::symmetric_exact(w.transpose() * &l.lambda().matrix * w);
    Ok((LegendrianSymmetricAlgebra::new_unchecked(sym, lambda, None)?, closure))
}

/// Full pipeline with certification tolerance `tol`.
pub fn decompose(l: &LegendrianSymmetricAlgebra, tol: f64) -> Result<DecompositionResult> {
    let mut report = ResidualReport::new();
    let mut warnings = Vec::new();

    let legendrian = l.validate(tol);
    if let Some(f) = legendrian.failures().next() {
        return Err(Error::Hypothesis {
            hypothesis: Hypothesis::Legendrian,
            detail: format!("check '{}' = {:e} (threshold {:e})", f.name, f.value, f.threshold),
        });
    }
    report.extend_prefixed("legendrian", &legendrian);
    report.extend_prefixed("symmetric", &l.sym().axiom_report(tol));
    if !l.sym().is_effective() {
        return Err(Error::Hypothesis {
            hypothesis: Hypothesis::Effective,
            detail: "g meets the center of h nontrivially".into(),
        });
    }
    let orth = l.sym().is_orthogonal();
    if !orth.orthogonal {
        return Err(Error::Hypothesis {
            hypothesis: Hypothesis::Orthogonal,
            detail: format!(
                "-kappa_h on g is not positive definite (eigenvalues in [{:e}, {:e}])",
                orth.min_eigenvalue, orth.max_eigenvalue
            ),
        });
    }

    let n = l.dim();
    let alg = l.algebra();
    let b_h = -&alg.killing_form().matrix;
    let split = euclidean_split(l, &b_h, tol)?;
    report.extend_prefixed("euclidean_split", &split.report);

    // J machinery on the complement of the Euclidean part.
    let dim_g_rest = split.g_rest.ncols();
    let w_rest = hcat(&[&split.g_rest, &split.p_rest]);
    let mut clusters: Vec<(f64, Mat)> = Vec::new();
    let mut scales = Vec::new();
    let mut eigenvalues = Vec::new();
    let mut lambda_rest = Mat::zeros(0, 0);
    if w_rest.ncols() > 0 {
        let (lr, closure) = restrict_to(l, &w_rest, dim_g_rest)?;
        report.residual("complement.closure", closure, tol);
        let jop = compute_j(&lr)?;
        report.extend_prefixed("j", &verify_j_properties(&jop, &lr, tol));
        let es = eigensplit_jsq(&jop, lr.sym())?;
        warnings.extend(es.warnings.iter().cloned());
        eigenvalues = es.clusters.iter().map(|c| c.eigenvalue).collect();
        let norm = normalize_scaling(&lr, &es, &jop, tol)?;
        report.residual("normalization.ideal", norm.ideal_residual, tol);
        scales = norm.scales.clone();
        let jn = compute_j(&norm.algebra)?;
        report.extend_prefixed("normalized_j", &verify_j_properties(&jn, &norm.algebra, tol));
        let es_n = eigensplit_jsq(&jn, norm.algebra.sym())?;
        warnings.extend(es_n.warnings.iter().cloned());
        let dev = es_n
            .clusters
            .iter()
            .map(|c| (c.eigenvalue.abs() - 1.0).abs())
            .fold(0.0, worst);
        report.residual("normalization.jsq_unit", dev, tol);
        for c in &es_n.clusters {
            clusters.push((c.eigenvalue, &w_rest * &c.basis));
        }
        lambda_rest = norm.algebra.lambda().matrix.clone();
    }

    // Rescaled Lambda in ambient coordinates: blockdiag over [h_0 | h'].
    let h0 = hcat(&[&split.g0, &split.p0]);
    let w_all = hcat(&[&h0, &w_rest]);
    let w_inv = w_all.clone().try_inverse().ok_or_else(|| Error::NotAnIdeal {
        what: "Euclidean part and complement do not span h".into(),
        residual: f64::INFINITY,
    })?;
    let lambda0 = h0.transpose() * &l.lambda().matrix * &h0;
    let blocks = block_diag(&[&lambda0, &lambda_rest]);
    let rescaled = BilinearForm::symmetric_exact(w_inv.transpose() * blocks * &w_inv);
    let ln = l.with_lambda(rescaled.clone())?;
    let j_full = ln
        .lambda()
        .matrix
        .clone()
        .lu()
        .solve(&b_h)
        .ok_or(Error::SingularForm { margin: 0.0 })?;

    // Simple ideals and their p-partners.
    let mut parts: Vec<(CanonicalType, Mat, Mat, f64)> = Vec::new();
    for g0i in split_simple_ideals(alg, &split.g0, &b_h) {
        let p0i = &j_full * &g0i;
        parts.push((CanonicalType::Euclidean, g0i, p0i, 1.0));
    }
    for (ev, basis) in &clusters {
        let kind = if *ev > 0.0 {
            CanonicalType::Compact
        } else {
            CanonicalType::Noncompact
        };
        for gi in split_simple_ideals(alg, basis, &b_h) {
            let pi = &j_full * &gi;
            parts.push((kind, gi, pi, *ev));
        }
    }

    let pieces = assemble_pieces(&parts);
    report.extend_prefixed("components", &extract_report(alg, &pieces, tol));

    let mut components = Vec::new();
    let j_orig = l
        .lambda()
        .matrix
        .clone()
        .lu()
        .solve(&b_h)
        .ok_or(Error::SingularForm { margin: 0.0 })?;
    for (kind, gi, _, _) in &parts {
        let gq = Subspace::span(gi).basis().clone();
        let pq = &j_full * &gq;
        let mut c = build_isomorphism(*kind, &ln, &b_h, &gq, &pq, tol)?;
        if *kind != CanonicalType::Euclidean {
            // J^2 acts on the simple ideal by its original eigenvalue.
            let v = gq.column(0).into_owned();
            let ev = v.dot(&(&j_orig * (&j_orig * &v)));
            c.lambda_scale = ev.abs().sqrt();
            c.j_scale = 1.0 / c.lambda_scale;
        }
        components.push(c);
    }
    components.sort_by_key(|c| (type_rank(c.kind), c.dim()));
    for (k, c) in components.iter().enumerate() {
        report.extend_prefixed(&format!("iso{k}.{}", c.kind.tag()), &c.certificate);
    }
    let mut cross = 0.0_f64;
    for a in 0..components.len() {
        for b in (a + 1)..components.len() {
            cross = worst(
                cross,
                cross_bracket(
                    alg,
                    &components[a].adapted_basis,
                    &components[b].adapted_basis,
                ),
            );
        }
    }
    report.residual("components.cross_brackets", cross, tol);
    let total: usize = components.iter().map(Component::dim).sum();
    if total != n {
        report.residual("components.dimension_sum", (n as f64 - total as f64).abs(), 0.5);
    }

    Ok(DecompositionResult {
        components,
        pieces,
        rescaled_lambda: rescaled,
        eigenvalues,
        scales,
        report,
        warnings,
    })
}

fn type_rank(kind: CanonicalType) -> u8 {
    match kind {
        CanonicalType::Euclidean => 0,
        CanonicalType::Compact => 1,
        CanonicalType::Noncompact => 2,
    }
}

fn assemble_pieces(parts: &[(CanonicalType, Mat, Mat, f64)]) -> Pieces {
    let n = parts.first().map_or(0, |p| p.1.nrows());
    let collect = |kind: CanonicalType, p: bool| {
        let cols: Vec<&Mat> = parts
            .iter()
            .filter(|x| x.0 == kind)
            .map(|x| if p { &x.2 } else { &x.1 })
            .collect();
        if cols.is_empty() {
            Subspace::zero(n)
        } else {
            Subspace::span(&hcat(&cols))
        }
    };
    Pieces {
        g0: collect(CanonicalType::Euclidean, false),
        gp: collect(CanonicalType::Compact, false),
        gm: collect(CanonicalType::Noncompact, false),
        p0: collect(CanonicalType::Euclidean, true),
        pp: collect(CanonicalType::Compact, true),
        pm: collect(CanonicalType::Noncompact, true),
    }
}

/// Commutation relations between the six pieces.
pub fn extract_report(
    alg: &crate::lie::LieAlgebra,
    pieces: &Pieces,
    tol: f64,
) -> ResidualReport {
    let mut r = ResidualReport::new();
    let [g0, gp, gm, p0, pp, pm] = [
        pieces.g0.basis(),
        pieces.gp.basis(),
        pieces.gm.basis(),
        pieces.p0.basis(),
        pieces.pp.basis(),
        pieces.pm.basis(),
    ];
    r.residual("g0_gp", cross_bracket(alg, g0, gp), tol);
    r.residual("g0_gm", cross_bracket(alg, g0, gm), tol);
    r.residual("gm_gp", cross_bracket(alg, gm, gp), tol);
    r.residual("p0_pp", cross_bracket(alg, p0, pp), tol);
    r.residual("p0_pm", cross_bracket(alg, p0, pm), tol);
    r.residual("pm_pp", cross_bracket(alg, pm, pp), tol);
    r.residual("p0_p0", cross_bracket(alg, p0, p0), tol);
    r.residual("pp_pp_in_gp", bracket_span(alg, pp, pp, gp), tol);
    r.residual("pm_pm_in_gm", bracket_span(alg, pm, pm, gm), tol);
    let mixed = [
        cross_bracket(alg, g0, pp),
        cross_bracket(alg, g0, pm),
        cross_bracket(alg, gp, p0),
        cross_bracket(alg, gp, pm),
        cross_bracket(alg, gm, p0),
        cross_bracket(alg, gm, pp),
    ]
    .into_iter()
    .fold(0.0, worst);
    r.residual("g_p_mixed", mixed, tol);
    r
}

/// Largest distance of `[x_a, y_b]` from `span(target)`.
fn bracket_span(alg: &crate::lie::LieAlgebra, xs: &Mat, ys: &Mat, target: &Mat) -> f64 {
    let mut res = 0.0_f64;
    for a in 0..xs.ncols() {
        let img = alg.ad(&xs.column(a).into_owned()) * ys;
        let off = if target.ncols() == 0 {
            max_abs(&img)
        } else {
            max_abs(&(&img - target * (target.transpose() * &img)))
        };
        res = worst(res, off);
    }
    res
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::legendrian::build;
    use crate::lie::builtin;

    fn model(kind: CanonicalType, g: &str) -> LegendrianSymmetricAlgebra {
        build(kind, &builtin(g).unwrap(), None).unwrap()
    }

    #[test]
    fn compact_su2_is_one_component() {
        let r = decompose(&model(CanonicalType::Compact, "su2"), DECOMPOSE_TOL).unwrap();
        assert!(r.passed(), "{}", r.report);
        assert_eq!(r.signature(), vec![(CanonicalType::Compact, 6)]);
        assert_eq!(r.pieces.dims(), [0, 3, 0, 0, 3, 0]);
        assert!((r.components[0].j_scale - 0.5).abs() < 1e-12);
    }

    #[test]
    fn scrambled_compact_plus_noncompact() {
        let l = model(CanonicalType::Compact, "su2")
            .direct_sum(&model(CanonicalType::Noncompact, "su2"))
            .scramble(42);
        let r = decompose(&l, DECOMPOSE_TOL).unwrap();
        assert!(r.passed(), "{}", r.report);
        assert_eq!(
            r.signature(),
            vec![(CanonicalType::Compact, 6), (CanonicalType::Noncompact, 6)]
        );
        assert_eq!(r.pieces.dims(), [0, 3, 3, 0, 3, 3]);
    }

    #[test]
    fn euclidean_part_is_split_structurally() {
        let r = decompose(&model(CanonicalType::Euclidean, "su2"), DECOMPOSE_TOL).unwrap();
        assert!(r.passed(), "{}", r.report);
        assert_eq!(r.signature(), vec![(CanonicalType::Euclidean, 6)]);
        let l = model(CanonicalType::Euclidean, "su2")
            .direct_sum(&model(CanonicalType::Compact, "su3"))
            .direct_sum(&model(CanonicalType::Noncompact, "su2"))
            .scramble(7);
        let r = decompose(&l, DECOMPOSE_TOL).unwrap();
        assert!(r.passed(), "{}", r.report);
        assert_eq!(
            r.signature(),
            vec![
                (CanonicalType::Euclidean, 6),
                (CanonicalType::Compact, 16),
                (CanonicalType::Noncompact, 6)
            ]
        );
    }

    #[test]
    fn simple_ideals_are_separated() {
        let l = model(CanonicalType::Compact, "su2+su3").scramble(3);
        let r = decompose(&l, DECOMPOSE_TOL).unwrap();
        assert!(r.passed(), "{}", r.report);
        assert_eq!(
            r.signature(),
            vec![(CanonicalType::Compact, 6), (CanonicalType::Compact, 16)]
        );
    }

    #[test]
    fn non_effective_input_names_the_hypothesis() {
        let l = build(CanonicalType::Euclidean, &builtin("su2+r1").unwrap(), None).unwrap();
        match decompose(&l, DECOMPOSE_TOL) {
            Err(Error::Hypothesis { hypothesis, .. }) => {
                assert_eq!(hypothesis, Hypothesis::Effective)
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
