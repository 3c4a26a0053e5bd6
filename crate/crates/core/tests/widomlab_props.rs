use cheblab::chebsolve::SolverConfig;
use cheblab::sets::SetSpec;
use cheblab::widomlab::{levelset_real_bound, tw_real_bound, widom_scan, LEVELSET_BOUND_SHARP};
use cheblab::{Complex64, ComplexPoly};
use proptest::prelude::*;

fn real_set() -> impl Strategy<Value = SetSpec> {
    prop_oneof![
        (-2.0f64..0.0, 0.5f64..3.0).prop_map(|(a, w)| SetSpec::interval(a, a + w)),
        (-1.0f64..1.0, 2.2f64..4.0).prop_map(|(b, c)| SetSpec::preimage(ComplexPoly::from_real(&[-c, b, 1.0]))),
    ]
}

fn any_set() -> impl Strategy<Value = SetSpec> {
    prop_oneof![
        real_set(),
        (0.1f64..1.0).prop_map(SetSpec::ellipse),
        (0.5f64..1.5).prop_map(SetSpec::square),
        (0.3f64..2.0).prop_map(|r| SetSpec::disk(Complex64::new(0.3, -0.2), r)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]

    #[test]
    fn widom_rows_are_consistent(spec in any_set(), n in 1usize..=6) {
        let scan = widom_scan(&spec, &[n], &SolverConfig::default()).unwrap();
        prop_assert!(scan.failures.is_empty());
        for r in &scan.rows {
            prop_assert!((r.widom - r.t_n / r.cap_pow).abs() <= 1e-12 * r.widom);
            prop_assert!(r.widom >= 1.0 - 1e-9, "{:?}", r);
        }
    }

    #[test]
    fn bound_verdict_matches_slack(spec in real_set(), alpha in 0.05f64..0.6) {
        let cfg = SolverConfig::default();
        let (mut reports, failures) = tw_real_bound(&spec, &[1, 2, 3, 5], &cfg).unwrap();
        prop_assert!(failures.is_empty());
        let (more, failures) = levelset_real_bound(&spec, &[alpha], &[2, 3], &cfg).unwrap();
        prop_assert!(failures.is_empty());
        reports.extend(more);
        for r in &reports {
            prop_assert_eq!(r.pass, r.slack >= -1e-9 * r.rhs);
            prop_assert!((r.slack - (r.rhs - r.lhs)).abs() <= 1e-12 * r.rhs);
        }
    }

    #[test]
    fn widom_factors_are_scale_invariant(s in 0.2f64..5.0, n in 1usize..=6) {
        let cfg = SolverConfig::default();
        for (base, scaled) in [
            (SetSpec::interval(-1.0, 1.0), SetSpec::interval(-s, s)),
            (SetSpec::unit_disk(), SetSpec::disk(Complex64::new(0.0, 0.0), s)),
        ] {
            let a = widom_scan(&base, &[n], &cfg).unwrap().rows[0].widom;
            let b = widom_scan(&scaled, &[n], &cfg).unwrap().rows[0].widom;
            prop_assert!((a - b).abs() <= 1e-10 * a, "{} vs {}", a, b);
        }
    }

    #[test]
    fn interval_level_sets_fill_the_sharp_bound(alpha in 0.05f64..1.0, n in 1usize..=8) {
        // Ellipses with foci at the interval ends: t_n = (1 + e^{-2n alpha}) C^n
        // and the interval has no gaps.
        let (reports, _) =
            levelset_real_bound(&SetSpec::interval(-2.0, 2.0), &[alpha], &[n], &SolverConfig::default()).unwrap();
        let sharp = reports.iter().find(|r| r.bound_name == LEVELSET_BOUND_SHARP).unwrap();
        let expected = 1.0 + (-2.0 * n as f64 * alpha).exp();
        prop_assert!((sharp.lhs / sharp.cap_pow - expected).abs() <= 1e-10 * expected);
        prop_assert!((sharp.lhs / sharp.rhs - 1.0).abs() <= 1e-10);
        prop_assert!(sharp.pass);
    }
}
