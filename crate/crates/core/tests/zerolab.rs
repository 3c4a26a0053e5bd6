use cheblab::chebsolve::{closed_form, solve, SolverConfig};
use cheblab::potential::{balayage_residual, GreenModel};
use cheblab::sets::SetSpec;
use cheblab::zerolab::{
    count_in_region, density_experiment, density_verdict, exterior_count, fejer_check, nthroot_asymptotics,
    zero_measure, DensityConfig, DensityThresholds, DensityVerdict, RegionSpec,
};
use cheblab::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn disk(center: Complex64, radius: f64) -> cheblab::zerolab::Region {
    RegionSpec::disk(center, radius).resolve(None).unwrap()
}

#[test]
fn bernoulli_zero_measure_is_two_half_atoms() {
    for n in [2, 4, 6] {
        let sol = closed_form(&SetSpec::bernoulli(), n).unwrap().unwrap();
        let mu = zero_measure(&sol).unwrap();
        assert_eq!(mu.len(), 2);
        assert_eq!(mu.total_mass(), 1.0);
        assert_eq!(count_in_region(&mu, &disk(c(1.0, 0.0), 0.1)), 0.5);
        assert_eq!(count_in_region(&mu, &disk(c(-1.0, 0.0), 0.1)), 0.5);
    }
}

#[test]
fn disk_zero_measure_is_a_point_mass() {
    let sol = closed_form(&SetSpec::unit_disk(), 5).unwrap().unwrap();
    let mu = zero_measure(&sol).unwrap();
    assert_eq!(mu.atoms, vec![c(0.0, 0.0)]);
    assert_eq!(mu.masses, vec![1.0]);
    assert_eq!(count_in_region(&mu, &disk(c(0.95, 0.0), 0.04)), 0.0);
    assert_eq!(exterior_count(&mu, &SetSpec::unit_disk(), 0.1).unwrap(), 0);
}

#[test]
fn interval_zeros_are_cosine_nodes() {
    let sol = closed_form(&SetSpec::interval(-2.0, 2.0), 4).unwrap().unwrap();
    let mu = zero_measure(&sol).unwrap();
    let mut expected: Vec<f64> = [1.0, 3.0, 5.0, 7.0]
        .iter()
        .map(|k| 2.0 * (k * std::f64::consts::PI / 8.0).cos())
        .collect();
    expected.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut got: Vec<f64> = mu.atoms.iter().map(|a| a.re).collect();
    got.sort_by(|a, b| a.partial_cmp(b).unwrap());
    for (g, e) in got.iter().zip(&expected) {
        assert!((g - e).abs() < 1e-12);
    }
    assert!(mu.masses.iter().all(|&m| m == 0.25));
}

#[test]
fn interval_fraction_follows_arcsine_law() {
    let limit = 2.0 / std::f64::consts::PI * 0.25f64.asin();
    let sol = closed_form(&SetSpec::interval(-2.0, 2.0), 60).unwrap().unwrap();
    let mu = zero_measure(&sol).unwrap();
    let f = count_in_region(&mu, &disk(c(0.0, 0.0), 0.5));
    assert!((f - limit).abs() < 1.0 / 60.0 + 1e-12, "{f} vs {limit}");
}

#[test]
fn rectangle_counts_boundary_atoms_inside() {
    let sol = closed_form(&SetSpec::bernoulli(), 2).unwrap().unwrap();
    let mu = zero_measure(&sol).unwrap();
    let r = RegionSpec::Rectangle {
        corners: [c(1.0, -1.0), c(2.0, 1.0)],
    }
    .resolve(None)
    .unwrap();
    assert_eq!(count_in_region(&mu, &r), 0.5);
    assert!(RegionSpec::disk(c(0.0, 0.0), 0.0).validate().is_err());
    assert!(RegionSpec::BoundaryBand { width: 0.1 }.resolve(None).is_err());
}

#[test]
fn fejer_passes_on_closed_forms_and_solver_output() {
    let cases = [
        (SetSpec::unit_disk(), 4),
        (SetSpec::interval(-2.0, 2.0), 7),
        (SetSpec::bernoulli(), 6),
        (SetSpec::ellipse(0.5), 5),
    ];
    for (spec, n) in cases {
        let sol = closed_form(&spec, n).unwrap().unwrap();
        let rep = fejer_check(&zero_measure(&sol).unwrap(), &spec).unwrap();
        assert!(rep.pass, "{spec:?} {rep:?}");
    }
    let sq = SetSpec::square(1.0);
    for n in [3, 6, 10] {
        let sol = solve(&sq, n, &SolverConfig::default()).unwrap();
        let rep = fejer_check(&zero_measure(&sol).unwrap(), &sq).unwrap();
        assert!(rep.pass, "n={n} {rep:?}");
    }
}

#[test]
fn fejer_flags_an_atom_far_outside() {
    let sol = closed_form(&SetSpec::unit_disk(), 3).unwrap().unwrap();
    let mut mu = zero_measure(&sol).unwrap();
    mu.atoms.push(c(4.0, 0.0));
    mu.masses = vec![0.5, 0.5];
    let rep = fejer_check(&mu, &SetSpec::unit_disk()).unwrap();
    assert!(!rep.pass);
    assert!((rep.max_violation - 3.0).abs() < 1e-3);
}

#[test]
fn nthroot_on_interval_tends_to_golden_ratio_square() {
    let spec = SetSpec::interval(-2.0, 2.0);
    let model = GreenModel::for_spec(&spec).unwrap();
    let limit = (3.0 + 5f64.sqrt()) / 2.0;
    let mut prev = f64::INFINITY;
    for n in [2, 5, 10, 20] {
        let sol = closed_form(&spec, n).unwrap().unwrap();
        let dev = nthroot_asymptotics(&sol, &model, &[c(3.0, 0.0)]).unwrap();
        // Direct oracle: (phi^n + phi^-n)^(1/n) / phi - 1.
        let direct = (limit.powi(n as i32) + limit.powi(-(n as i32))).powf(1.0 / n as f64) / limit - 1.0;
        assert!((dev - direct).abs() < 1e-12);
        assert!(dev < prev);
        prev = dev;
    }
    let sol = closed_form(&spec, 3).unwrap().unwrap();
    assert!(nthroot_asymptotics(&sol, &model, &[c(1.0, 0.0)]).is_err());
}

#[test]
fn nthroot_is_exact_on_disk_and_lemniscate() {
    let d = SetSpec::unit_disk();
    let sol = closed_form(&d, 7).unwrap().unwrap();
    let m = GreenModel::for_spec(&d).unwrap();
    assert!(nthroot_asymptotics(&sol, &m, &[c(1.5, 0.5), c(-3.0, 2.0)]).unwrap() < 1e-14);
    let b = SetSpec::bernoulli();
    let sol = closed_form(&b, 4).unwrap().unwrap();
    let m = GreenModel::for_spec(&b).unwrap();
    assert!(nthroot_asymptotics(&sol, &m, &[c(3.0, 0.0), c(0.0, 2.5)]).unwrap() < 1e-14);
}

#[test]
fn balayage_residual_decreases_on_interval() {
    let spec = SetSpec::interval(-2.0, 2.0);
    let ring = GreenModel::for_spec(&spec).unwrap().hull().test_ring(2.0, 32);
    let mut prev = f64::INFINITY;
    for n in [2, 4, 8, 16] {
        let mu = zero_measure(&closed_form(&spec, n).unwrap().unwrap()).unwrap();
        let r = balayage_residual(&mu, &spec, &ring).unwrap();
        // Strictly decreasing until the rounding floor.
        assert!(r < prev || r < 1e-13, "{r} after {prev}");
        prev = r;
    }
    assert!(prev < 1e-2);
}

#[test]
fn verdict_thresholds() {
    let th = DensityThresholds::default();
    assert_eq!(density_verdict(&[0.1, 0.0, 0.001, 0.0], &th).1, DensityVerdict::DensityVanishing);
    assert_eq!(density_verdict(&[0.0, 0.03, 0.05, 0.045], &th).1, DensityVerdict::DensityPositive);
    assert_eq!(density_verdict(&[0.0, 0.03, 0.1, 0.03], &th).1, DensityVerdict::Inconclusive);
    assert_eq!(density_verdict(&[], &th).1, DensityVerdict::Inconclusive);
}

#[test]
fn ellipse_boundary_band_has_no_zeros() {
    let spec = SetSpec::ellipse(0.5);
    let rep = density_experiment(
        &spec,
        &RegionSpec::BoundaryBand { width: 0.1 },
        &[4, 8, 12, 16],
        &DensityConfig::default(),
    )
    .unwrap();
    assert_eq!(rep.verdict, DensityVerdict::DensityVanishing);
    assert_eq!(rep.n_values, vec![4, 8, 12, 16]);
    assert!(rep.missing.is_empty());
    assert!(rep.potential_residuals.windows(2).all(|w| w[1] <= w[0] + 1e-13));
    let mut out = Vec::new();
    rep.write_csv(&mut out).unwrap();
    let text = String::from_utf8(out).unwrap();
    assert!(text.starts_with("n,fraction,residual\n4,0.0000000000000000e0,"), "{text}");
}
