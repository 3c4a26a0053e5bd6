use cheblab::chebsolve::{closed_form, solve, SolverConfig};
use cheblab::potential::{balayage_residual, GreenModel};
use cheblab::sets::SetSpec;
use cheblab::zerolab::{count_in_region, fejer_check, zero_measure, RegionSpec};
use cheblab::{Complex64, ComplexPoly};
use proptest::prelude::*;

fn golden_family() -> impl Strategy<Value = SetSpec> {
    prop_oneof![
        (0.1f64..1.0).prop_map(SetSpec::ellipse),
        (-2.0f64..0.0, 0.5f64..3.0).prop_map(|(a, w)| SetSpec::interval(a, a + w)),
        (0.6f64..2.0).prop_map(|a| SetSpec::lemniscate(ComplexPoly::from_real(&[-1.0, 0.0, 1.0]), a)),
        Just(SetSpec::preimage(ComplexPoly::from_real(&[-3.0, 0.0, 1.0]))),
    ]
}

/// Golden families whose power-basis coefficients still resolve t_n at
/// n = 16: capacity at least 1/2 and centered near the origin.
fn well_conditioned_family() -> impl Strategy<Value = SetSpec> {
    prop_oneof![
        (0.1f64..1.0).prop_map(SetSpec::ellipse),
        (-0.5f64..0.5, 2.0f64..4.0).prop_map(|(m, w)| SetSpec::interval(m - w / 2.0, m + w / 2.0)),
        (0.6f64..2.0).prop_map(|a| SetSpec::lemniscate(ComplexPoly::from_real(&[-1.0, 0.0, 1.0]), a)),
        Just(SetSpec::preimage(ComplexPoly::from_real(&[-3.0, 0.0, 1.0]))),
    ]
}

fn solver_family() -> impl Strategy<Value = SetSpec> {
    prop_oneof![
        (0.5f64..1.5).prop_map(SetSpec::square),
        (-1.0f64..1.0, 2.2f64..4.0).prop_map(|(b, c)| SetSpec::preimage(ComplexPoly::from_real(&[-c, b, 1.0]))),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn masses_add_up_to_one(spec in golden_family(), n in 1usize..=20) {
        let sol = solve(&spec, n, &SolverConfig::default()).unwrap();
        let mu = zero_measure(&sol).unwrap();
        prop_assert_eq!(mu.count, Some(n));
        let counts: usize = mu.masses.iter().map(|m| (m * n as f64).round() as usize).sum();
        prop_assert_eq!(counts, n);
        prop_assert!((mu.total_mass() - 1.0).abs() <= n as f64 * f64::EPSILON);
    }

    #[test]
    fn region_fractions_lie_in_unit_interval(
        spec in golden_family(),
        n in 1usize..=16,
        cx in -2.0f64..2.0,
        cy in -1.0f64..1.0,
        r in 0.01f64..3.0,
    ) {
        let sol = solve(&spec, n, &SolverConfig::default()).unwrap();
        let mu = zero_measure(&sol).unwrap();
        let region = RegionSpec::disk(Complex64::new(cx, cy), r).resolve(None).unwrap();
        let f = count_in_region(&mu, &region);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&f), "{}", f);
    }

    #[test]
    fn zeros_of_closed_forms_stay_in_the_hull(spec in well_conditioned_family(), n in 1usize..=20) {
        let sol = solve(&spec, n, &SolverConfig::default()).unwrap();
        prop_assert!(sol.is_converged());
        let rep = fejer_check(&zero_measure(&sol).unwrap(), &spec).unwrap();
        prop_assert!(rep.pass, "{:?}", rep);
    }

    #[test]
    fn bernoulli_even_degrees_split_evenly(k in 1usize..=12) {
        let sol = closed_form(&SetSpec::bernoulli(), 2 * k).unwrap().unwrap();
        let mu = zero_measure(&sol).unwrap();
        for x in [-1.0, 1.0] {
            let region = RegionSpec::disk(Complex64::new(x, 0.0), 0.1).resolve(None).unwrap();
            prop_assert_eq!(count_in_region(&mu, &region), 0.5);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn zeros_of_solver_output_stay_in_the_hull(spec in solver_family(), n in 2usize..=8) {
        let sol = solve(&spec, n, &SolverConfig::default()).unwrap();
        prop_assume!(sol.is_converged());
        let rep = fejer_check(&zero_measure(&sol).unwrap(), &spec).unwrap();
        prop_assert!(rep.pass, "{:?}", rep);
    }

    #[test]
    fn balayage_residual_decreases_along_n(spec in well_conditioned_family()) {
        let ring = GreenModel::for_spec(&spec).unwrap().hull().test_ring(2.0, 64);
        let mut prev = f64::INFINITY;
        for n in [2, 4, 8, 16] {
            let mu = zero_measure(&solve(&spec, n, &SolverConfig::default()).unwrap()).unwrap();
            let r = balayage_residual(&mu, &spec, &ring).unwrap();
            prop_assert!(r < prev || r < 1e-10, "n = {}: {} after {}", n, r, prev);
            prev = r;
        }
    }
}
