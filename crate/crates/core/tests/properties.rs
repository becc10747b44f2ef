// SPDX-License-Identifier: Apache-2.0

use moment_space::format::{algebra_from_json, algebra_to_json, canonical_string};
use moment_space::groups::{
    check_prop_tau, check_prop_xi, orbit_two_form, upsilon_eval, GroupRealization,
};
use moment_space::legendrian::{build, scramble_matrix};
use moment_space::linalg::{expm, max_abs, right_singular, singular_values, Mat, Subspace, Vector};
use moment_space::{builtin, decompose, CanonicalType, LinearOperator, ResidualReport};
use proptest::prelude::*;

fn kind_strategy() -> impl Strategy<Value = CanonicalType> {
    prop_oneof![
        Just(CanonicalType::Euclidean),
        Just(CanonicalType::Compact),
        Just(CanonicalType::Noncompact),
    ]
}

fn vec_strategy(n: usize) -> impl Strategy<Value = Vector> {
    proptest::collection::vec(-1.0f64..1.0, n).prop_map(Vector::from_vec)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn basis_change_preserves_jacobi_and_congruence(seed in any::<u64>()) {
        let g = builtin("su3").unwrap();
        let m = scramble_matrix(8, seed);
        let h = g.change_basis(&LinearOperator::new(m.clone())).unwrap();
        prop_assert!(h.jacobi_residual() < 1e-10);
        let lhs = h.killing_form().matrix;
        let minv = m.clone().try_inverse().unwrap();
        let rhs = minv.transpose() * g.killing_form().matrix * &minv;
        prop_assert!(max_abs(&(lhs - &rhs)) < 1e-9 * max_abs(&rhs).max(1.0));
    }

    #[test]
    fn scrambled_models_stay_legendrian(kind in kind_strategy(), seed in any::<u64>()) {
        let g = builtin("su2").unwrap();
        let l = build(kind, &g, None).unwrap().scramble(seed);
        let report = l.validate(l.default_tolerance());
        prop_assert!(report.passed(), "{}", report);
    }

    #[test]
    fn exponential_inverts(entries in proptest::collection::vec(-1.0f64..1.0, 16)) {
        let a = Mat::from_vec(4, 4, entries);
        let a = &a * (2.0 / singular_values(&a)[0].max(1e-12));
        let prod = expm(&a) * expm(&(-&a));
        prop_assert!(max_abs(&(prod - Mat::identity(4, 4))) < 1e-12);
    }

    #[test]
    fn singular_vectors_reconstruct_low_rank(
        left in proptest::collection::vec(-1.0f64..1.0, 12),
        right in proptest::collection::vec(-1.0f64..1.0, 10),
    ) {
        let a = Mat::from_vec(6, 2, left) * Mat::from_vec(2, 5, right);
        let (sv, v) = right_singular(&a);
        prop_assert!(sv[2..].iter().all(|&s| s < 1e-12 * sv[0].max(1.0)));
        let top = v.columns(0, 2);
        let back = &a * top * top.transpose();
        prop_assert!(max_abs(&(back - &a)) < 1e-12 * max_abs(&a).max(1.0));
    }

    #[test]
    fn principal_angle_is_symmetric(
        a in proptest::collection::vec(-1.0f64..1.0, 10),
        b in proptest::collection::vec(-1.0f64..1.0, 10),
    ) {
        let sa = Subspace::span(&Mat::from_vec(5, 2, a));
        let sb = Subspace::span(&Mat::from_vec(5, 2, b));
        let ab = sa.max_principal_angle(&sb).unwrap();
        let ba = sb.max_principal_angle(&sa).unwrap();
        prop_assert!((ab - ba).abs() < 1e-12);
        prop_assert!(sa.max_principal_angle(&sa).unwrap() < 1e-14);
    }

    #[test]
    fn canonical_floats_roundtrip(x in any::<f64>().prop_filter("finite", |x| x.is_finite())) {
        let text = canonical_string(&serde_json::json!(x));
        let back: f64 = text.trim().parse().unwrap();
        prop_assert_eq!(back.to_bits(), x.to_bits());
    }

    #[test]
    fn algebra_json_roundtrips_scrambled_structure(seed in any::<u64>()) {
        let g = builtin("su2+su2").unwrap()
            .change_basis(&LinearOperator::new(scramble_matrix(6, seed)))
            .unwrap();
        let back = algebra_from_json(&algebra_to_json(&g)).unwrap();
        for i in 0..6 {
            prop_assert!(max_abs(&(g.ad_basis(i) - back.ad_basis(i))) == 0.0);
        }
    }

    #[test]
    fn identity_suites_hold_for_any_seed(kind in kind_strategy(), seed in any::<u64>()) {
        let r = GroupRealization::builtin(kind, "su2").unwrap();
        let tau = check_prop_tau(&r, 1, seed, 1e-9).unwrap();
        prop_assert!(tau.passed(), "{}", tau);
        let xi = check_prop_xi(&r, 1, seed, 1e-9).unwrap();
        prop_assert!(xi.passed(), "{}", xi);
    }

    #[test]
    fn orbit_form_alternates(
        kind in kind_strategy(),
        seed in any::<u64>(),
        x in vec_strategy(3),
        y in vec_strategy(3),
    ) {
        let r = GroupRealization::builtin(kind, "su2").unwrap();
        let h = r.sample_point(seed);
        let xy = orbit_two_form(&r, &h, &x, &y).unwrap();
        let yx = orbit_two_form(&r, &h, &y, &x).unwrap();
        prop_assert!((xy + yx).abs() < 1e-11);
    }

    #[test]
    fn upsilon_alternates(kind in kind_strategy(), a in vec_strategy(6), b in vec_strategy(6), c in vec_strategy(6)) {
        let r = GroupRealization::builtin(kind, "su2").unwrap();
        let id = r.identity();
        let abc = upsilon_eval(&r, &id, &a, &b, &c);
        prop_assert!((abc + upsilon_eval(&r, &id, &b, &a, &c)).abs() < 1e-13);
        prop_assert!((abc + upsilon_eval(&r, &id, &a, &c, &b)).abs() < 1e-13);
        prop_assert!((abc - upsilon_eval(&r, &id, &b, &c, &a)).abs() < 1e-13);
        prop_assert!(upsilon_eval(&r, &id, &a, &a, &c).abs() < 1e-13);
    }

    #[test]
    fn record_max_is_order_independent(values in proptest::collection::vec(0.0f64..1.0, 1..20)) {
        let mut fwd = ResidualReport::new();
        let mut rev = ResidualReport::new();
        for v in &values {
            fwd.record_max("x", *v, 0.5);
        }
        for v in values.iter().rev() {
            rev.record_max("x", *v, 0.5);
        }
        prop_assert_eq!(fwd, rev);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn decomposition_recovers_mixed_sums(seed in any::<u64>()) {
        let g = builtin("su2").unwrap();
        let a = build(CanonicalType::Compact, &g, None).unwrap();
        let b = build(CanonicalType::Noncompact, &g, None).unwrap();
        let c = build(CanonicalType::Euclidean, &g, None).unwrap();
        let l = a.direct_sum(&b).direct_sum(&c).scramble(seed);
        let d = decompose(&l, 1e-8).unwrap();
        prop_assert!(d.passed(), "{}", d.report);
        prop_assert_eq!(
            d.signature(),
            vec![
                (CanonicalType::Euclidean, 6),
                (CanonicalType::Compact, 6),
                (CanonicalType::Noncompact, 6),
            ]
        );
    }
}
