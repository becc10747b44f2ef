// SPDX-License-Identifier: Apache-2.0

//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines are always printed; exits non-zero on any failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use moment_space::decomposition::{compute_j, eigensplit_jsq, normalize_scaling, verify_j_properties};
use moment_space::groups::{
    check_min_degeneracy, check_min_degeneracy_samples, check_prop_tau, check_prop_xi,
    cross_check_canonical, explicit_compact_point, kernel_plus_ad, kernel_tau, sample_rng,
    FRAMES_PER_SAMPLE,
};
use moment_space::legendrian::build;
use moment_space::linalg::{expm, max_abs, max_abs_vec, CMat, Mat, Vector, C64};
use moment_space::{
    builtin, decompose, BilinearForm, CanonicalType, GroupRealization, LegendrianSymmetricAlgebra,
    LinearOperator, ResidualReport,
};
use rand::seq::IndexedRandom;
use rand::Rng;

const SAMPLES: usize = 100;
const SEED: u64 = 0;
const FORM_TOL: f64 = 1e-8;

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self {
            pass,
            detail: detail.into(),
        }
    }
}

/// Accumulates the failures of one criterion.
#[derive(Default)]
struct Ledger {
    failures: Vec<String>,
    worst: f64,
}

impl Ledger {
    fn below(&mut self, what: &str, value: f64, bound: f64) {
        if value.is_finite() {
            self.worst = self.worst.max(value);
        }
        if !(value < bound) {
            self.failures.push(format!("{what} = {value:e} (bound {bound:e})"));
        }
    }

    fn require(&mut self, what: &str, ok: bool) {
        if !ok {
            self.failures.push(what.to_string());
        }
    }

    fn report(&mut self, prefix: &str, report: &ResidualReport, bound: f64) {
        for c in &report.checks {
            self.require(&format!("{prefix}.{} fails its own threshold", c.name), c.passed());
            if c.bound == moment_space::Bound::Upper {
                self.below(&format!("{prefix}.{}", c.name), c.value, bound);
            }
        }
    }

    fn finish(self, ok_detail: String) -> Outcome {
        if self.failures.is_empty() {
            Outcome::new(true, format!("{ok_detail}; worst residual {:.2e}", self.worst))
        } else {
            Outcome::new(false, self.failures.join("; "))
        }
    }
}

fn model(kind: CanonicalType, g: &str) -> LegendrianSymmetricAlgebra {
    build(kind, &builtin(g).unwrap(), None).unwrap()
}

fn realization(kind: CanonicalType) -> GroupRealization {
    GroupRealization::builtin(kind, "su2").unwrap()
}

fn algebra_core() -> Outcome {
    let mut ledger = Ledger::default();
    let su2 = builtin("su2").unwrap();
    let kappa = su2.killing_form().matrix;
    ledger.below(
        "killing(su2) + 2I",
        max_abs(&(kappa + Mat::identity(3, 3) * 2.0)),
        1e-12,
    );
    for name in ["su2", "so3", "su3", "su2su2", "su2+su3", "su2+r1", "r3"] {
        let g = builtin(name).unwrap();
        ledger.below(&format!("jacobi({name})"), g.jacobi_residual(), 1e-12);
    }
    ledger.finish("killing(su2) = -2I; jacobi exact on all builtins".into())
}

fn canonical_constructions() -> Outcome {
    let mut ledger = Ledger::default();
    let mut count = 0;
    for g in ["su2", "su2+su2", "su3"] {
        for kind in CanonicalType::ALL {
            let l = model(kind, g);
            let report = l.validate(1e-10);
            ledger.report(&format!("{}({g})", kind.name()), &report, 1e-10);
            for name in ["s_skew", "ad_invariance", "g_isotropy", "p_isotropy"] {
                ledger.require(&format!("{name} is reported"), report.get(name).is_some());
            }
            count += 1;
        }
    }
    ledger.finish(format!("{count} models validated"))
}

fn j_operator_suite() -> Outcome {
    let mut ledger = Ledger::default();
    for g in ["su2", "su3"] {
        for (kind, sign) in [(CanonicalType::Compact, 1.0), (CanonicalType::Noncompact, -1.0)] {
            let tag = format!("{}({g})", kind.name());
            // Rescaling Lambda makes the normalization step non-trivial.
            let base = model(kind, g);
            let l = base.with_lambda(base.lambda().scaled(3.0)).unwrap();
            let j = compute_j(&l).unwrap();
            ledger.report(&tag, &verify_j_properties(&j, &l, 1e-10), 1e-10);
            let split = eigensplit_jsq(&j, l.sym()).unwrap();
            let normalized = normalize_scaling(&l, &split, &j, 1e-10).unwrap();
            let jn = compute_j(&normalized.algebra).unwrap();
            ledger.report(
                &format!("{tag}.normalized"),
                &verify_j_properties(&jn, &normalized.algebra, 1e-10),
                1e-10,
            );
            let after = eigensplit_jsq(&jn, normalized.algebra.sym()).unwrap();
            for c in &after.clusters {
                ledger.below(&format!("{tag} |jsq - ({sign})|"), (c.eigenvalue - sign).abs(), 1e-9);
            }
            ledger.require(&format!("{tag} has one J^2 cluster"), after.clusters.len() == 1);
        }
    }
    ledger.finish("lemma suite holds; J^2 normalizes to +1 (compact), -1 (noncompact)".into())
}

fn kind_index(kind: CanonicalType) -> usize {
    CanonicalType::ALL.iter().position(|&k| k == kind).unwrap()
}

fn sorted(mut sig: Vec<(CanonicalType, usize)>) -> Vec<(usize, usize)> {
    let mut keys: Vec<(usize, usize)> = sig.drain(..).map(|(k, d)| (kind_index(k), d)).collect();
    keys.sort();
    keys
}

fn decomposition_roundtrip() -> Outcome {
    let menu = [
        (CanonicalType::Compact, "su2"),
        (CanonicalType::Noncompact, "su2"),
        (CanonicalType::Euclidean, "su2"),
        (CanonicalType::Compact, "su3"),
    ];
    let mut ledger = Ledger::default();
    let mut max_dim = 0;
    for seed in 0..20u64 {
        let mut rng = sample_rng(0xdec0, seed);
        let picks = loop {
            let k = rng.random_range(2..=3);
            let picks: Vec<_> = (0..k).map(|_| *menu.choose(&mut rng).unwrap()).collect();
            let dim: usize = picks.iter().map(|&(_, g)| if g == "su3" { 16 } else { 6 }).sum();
            if dim <= 36 {
                break picks;
            }
        };
        let summands: Vec<_> = picks.iter().map(|&(kind, g)| model(kind, g)).collect();
        let expected = sorted(picks.iter().zip(&summands).map(|(&(k, _), l)| (k, l.dim())).collect());
        let total = summands[1..]
            .iter()
            .fold(summands[0].clone(), |acc, l| acc.direct_sum(l));
        max_dim = max_dim.max(total.dim());
        let scrambled = total.scramble(seed);
        let d = match decompose(&scrambled, 1e-8) {
            Ok(d) => d,
            Err(e) => {
                ledger.require(&format!("seed {seed}: {e}"), false);
                continue;
            }
        };
        ledger.require(
            &format!("seed {seed}: signature {:?} vs {:?}", sorted(d.signature()), expected),
            sorted(d.signature()) == expected,
        );
        for (i, c) in d.components.iter().enumerate() {
            ledger.below(&format!("seed {seed} component {i} iso"), c.iso_residual, 1e-8);
            ledger.report(&format!("seed {seed} component {i}"), &c.certificate, 1e-8);
        }
        ledger.require(&format!("seed {seed}: report passes"), d.passed());
    }
    ledger.finish(format!("20 seeds recovered exactly, dims up to {max_dim}"))
}

/// Truncated power series, summed to 30 terms.
fn series_exp(a: &CMat) -> CMat {
    let n = a.nrows();
    let mut term = CMat::identity(n, n);
    let mut sum = term.clone();
    for k in 1..30 {
        term = &term * a / C64::new(k as f64, 0.0);
        sum += &term;
    }
    sum
}

fn ball(rng: &mut impl Rng, n: usize, radius: f64) -> Vector {
    let v = Vector::from_fn(n, |_, _| rng.random_range(-1.0..1.0));
    let r = radius * rng.random_range(0.0..1.0);
    v.normalize() * r
}

fn cmax(m: &CMat) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// Central difference of `t -> h exp(t zeta) h^-1` in the faithful model.
fn adjoint_by_difference(r: &GroupRealization, h: &CMat, zeta: &Vector) -> Vector {
    let step = 1e-5;
    let hinv = h.clone().try_inverse().unwrap();
    let curve = |t: f64| h * series_exp(&(r.embed(zeta) * C64::new(t, 0.0))) * &hinv;
    let diff = (curve(step) - curve(-step)) / C64::new(2.0 * step, 0.0);
    r.decode(&diff)
}

fn group_identity_suite() -> Outcome {
    let mut ledger = Ledger::default();
    for kind in CanonicalType::ALL {
        let r = realization(kind);
        let tag = kind.name();
        ledger.report(
            &format!("{tag}.realization"),
            &r.check_realization(SAMPLES, SEED, FORM_TOL).unwrap(),
            FORM_TOL,
        );
        let tau = check_prop_tau(&r, SAMPLES, SEED, FORM_TOL).unwrap();
        let xi = check_prop_xi(&r, SAMPLES, SEED, FORM_TOL).unwrap();
        for name in ["basic_right", "horizontal", "equivariant_left", "contraction_xi_l"] {
            ledger.require(&format!("{tag}.{name} reported"), tau.get(name).is_some());
        }
        for name in ["structure_dgamma", "structure_dpi", "d_upsilon", "contraction_upsilon"] {
            ledger.require(&format!("{tag}.{name} reported"), xi.get(name).is_some());
        }
        ledger.report(&format!("{tag}.tau"), &tau, FORM_TOL);
        ledger.report(&format!("{tag}.xi"), &xi, FORM_TOL);

        let mut rng = sample_rng(0xe4, kind_index(kind) as u64);
        for i in 0..20 {
            let zeta = ball(&mut rng, r.dim(), 2.0);
            let a = r.embed(&zeta);
            let err = cmax(&(expm(&a) - series_exp(&a))) / (1.0 + cmax(&series_exp(&a)));
            ledger.below(&format!("{tag}.expm_vs_series[{i}]"), err, 1e-12);

            let h = r.sample_point(1000 + i);
            let hm = r.to_matrix(&h);
            let x = ball(&mut rng, r.dim(), 1.0);
            let fd = adjoint_by_difference(&r, &hm, &x);
            let ad = r.adjoint_of(&h).unwrap().apply(&x);
            ledger.below(
                &format!("{tag}.ad_vs_difference[{i}]"),
                max_abs_vec(&(fd - &ad)) / (1.0 + max_abs_vec(&ad)),
                1e-7,
            );
        }
    }
    ledger.finish(format!(
        "3 cases x {SAMPLES} points x {FRAMES_PER_SAMPLE} frames; expm and Ad match independent oracles"
    ))
}

fn cross_checks() -> Outcome {
    let mut ledger = Ledger::default();
    let compact = cross_check_canonical(&realization(CanonicalType::Compact), SAMPLES, SEED, FORM_TOL)
        .unwrap();
    for name in ["tau_amm", "xi_amm", "orbit_amm"] {
        ledger.require(&format!("compact.{name} reported"), compact.get(name).is_some());
    }
    ledger.report("compact", &compact, FORM_TOL);

    let euclidean =
        cross_check_canonical(&realization(CanonicalType::Euclidean), SAMPLES, SEED, FORM_TOL)
            .unwrap();
    ledger.require("euclidean.tau_coadjoint reported", euclidean.get("tau_coadjoint").is_some());
    for name in ["tau_coadjoint", "orbit_kks", "xi_zero"] {
        ledger.below(&format!("euclidean.{name}"), euclidean.value(name), 1e-12);
    }
    ledger.report("euclidean", &euclidean, FORM_TOL);

    let noncompact =
        cross_check_canonical(&realization(CanonicalType::Noncompact), SAMPLES, SEED, FORM_TOL)
            .unwrap();
    ledger.below("noncompact.membership", noncompact.value("membership"), 1e-10);
    ledger.require(
        "noncompact: ker tau_p = 0 on every sample",
        noncompact.get("kernel_tau_dim").map(|c| c.value) == Some(0.0),
    );
    ledger.report("noncompact", &noncompact, FORM_TOL);
    ledger.finish("AMM, coadjoint and P^C forms reproduced".into())
}

fn minimal_degeneracy() -> Outcome {
    let mut ledger = Ledger::default();
    for kind in CanonicalType::ALL {
        let r = realization(kind);
        let (report, lo, hi) = check_min_degeneracy_samples(&r, SAMPLES, SEED, 1e-7).unwrap();
        ledger.report(kind.name(), &report, 1e-7);
        ledger.require(&format!("{} kernel dims {lo}..{hi} sane", kind.name()), lo <= hi);
    }
    let r = realization(CanonicalType::Compact);
    let h = explicit_compact_point(&r).unwrap();
    let ker_tau = kernel_tau(&r, &h).unwrap().dim();
    let ker_ad = kernel_plus_ad(&r, &h).unwrap().dim();
    ledger.require(&format!("explicit point dim ker tau = {ker_tau}, expected 2"), ker_tau == 2);
    ledger.require(&format!("explicit point dim ker(1+Ad_k) = {ker_ad}, expected 2"), ker_ad == 2);
    ledger.report("explicit", &check_min_degeneracy(&r, &h, 1e-7).unwrap(), 1e-7);
    ledger.finish(format!("{SAMPLES} points per case; explicit point kernel dim {ker_tau}"))
}

/// Some named check of `report` exceeds ten times its tolerance.
fn detected(report: &ResidualReport, tol: f64) -> Option<(String, f64)> {
    report
        .checks
        .iter()
        .filter(|c| c.bound == moment_space::Bound::Upper && c.value > 10.0 * tol)
        .max_by(|a, b| a.value.total_cmp(&b.value))
        .map(|c| (c.name.clone(), c.value))
}

fn negative_controls() -> Outcome {
    let tol = 1e-9;
    let mut found = Vec::new();
    let mut ledger = Ledger::default();
    let mut note = |what: &str, hit: Option<(String, f64)>, ledger: &mut Ledger| match hit {
        Some((name, v)) => found.push(format!("{what} -> {name} ({v:.1e})")),
        None => ledger.require(&format!("{what} went undetected"), false),
    };

    let l = model(CanonicalType::Compact, "su2");
    let n = l.dim();
    let mut rot = Mat::identity(n, n);
    rot[(0, 3)] = 1e-3;
    let s_bad = LinearOperator::new(&l.sym().s().matrix * rot);
    let broken_s = l.with_involution(s_bad).unwrap();
    note("broken s-skewness", detected(&broken_s.validate(tol), tol), &mut ledger);

    let g = builtin("su3").unwrap().perturbed(0, 1, 2, 1e-3);
    let mut alg = ResidualReport::new();
    alg.residual("jacobi", g.jacobi_residual(), tol);
    note("perturbed structure constant", detected(&alg, tol), &mut ledger);

    let mut m = l.lambda().matrix.clone();
    m[(0, 4)] += 1e-3;
    m[(4, 0)] += 1e-3;
    let bad = l.with_lambda(BilinearForm::symmetric(m, 1e-12).unwrap()).unwrap();
    note("corrupted Lambda", detected(&bad.validate(tol), tol), &mut ledger);
    let j = compute_j(&bad).unwrap();
    note("corrupted Lambda (J lemmas)", detected(&verify_j_properties(&j, &bad, tol), tol), &mut ledger);

    let r = realization(CanonicalType::Compact);
    let r_bad = r.with_lambda_unchecked(r.lambda() + Mat::identity(n, n) * 1e-3).unwrap();
    let tau = check_prop_tau(&r_bad, 10, SEED, FORM_TOL).unwrap();
    note("corrupted Lambda (group forms)", detected(&tau, FORM_TOL), &mut ledger);

    if ledger.failures.is_empty() {
        Outcome::new(true, found.join("; "))
    } else {
        Outcome::new(false, ledger.failures.join("; "))
    }
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome, Option<Duration>); 8] = [
        ("1 algebra core", algebra_core, Some(Duration::from_millis(100))),
        ("2 canonical constructions", canonical_constructions, None),
        ("3 J-operator lemma suite", j_operator_suite, None),
        ("4 decomposition roundtrip", decomposition_roundtrip, Some(Duration::from_secs(5))),
        ("5 group identity suite", group_identity_suite, Some(Duration::from_secs(10))),
        ("6 cross-checks", cross_checks, None),
        ("7 minimal degeneracy", minimal_degeneracy, None),
        ("8 negative controls", negative_controls, None),
    ];
    let mut all = true;
    for (name, run, budget) in criteria {
        let start = Instant::now();
        let mut outcome = run();
        let elapsed = start.elapsed();
        if let Some(b) = budget {
            if elapsed >= b {
                outcome.pass = false;
                outcome.detail = format!("over budget {b:?}; {}", outcome.detail);
            }
        }
        all &= outcome.pass;
        let status = if outcome.pass { "PASS" } else { "FAIL" };
        println!("{status} criterion {name} [{:.3}s]: {}", elapsed.as_secs_f64(), outcome.detail);
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
