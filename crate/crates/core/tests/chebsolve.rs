use cheblab::chebsolve::{
    certificate_check, closed_form, interval_chebyshev, lp_oracle, solve, solve_complex, solve_real, widom_factor,
    CertificateVerdict, Method, SolveStatus, SolverConfig,
};
use cheblab::sets::{self, SetSpec};
use cheblab::{Complex64, ComplexPoly};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn max_coeff_diff(a: &ComplexPoly, b: &ComplexPoly) -> f64 {
    let n = a.coeffs().len().max(b.coeffs().len());
    (0..n)
        .map(|k| {
            let x = a.coeffs().get(k).copied().unwrap_or_default();
            let y = b.coeffs().get(k).copied().unwrap_or_default();
            (x - y).norm()
        })
        .fold(0.0, f64::max)
}

#[test]
fn lawson_disk_monomial() {
    let s = solve_complex(&SetSpec::unit_disk(), 3, &SolverConfig::default()).unwrap();
    assert_eq!(s.method, Method::Lawson);
    assert!((s.t_n - 1.0).abs() < 1e-8, "{}", s.t_n);
    assert!(max_coeff_diff(&s.poly, &ComplexPoly::from_real(&[0.0, 0.0, 0.0, 1.0])) < 1e-8);
    assert!(s.extreme_points.len() >= 4);
}

#[test]
fn lawson_interval_as_complex_set() {
    let s = solve_complex(&SetSpec::interval(-2.0, 2.0), 5, &SolverConfig::default()).unwrap();
    assert!((s.t_n / 2.0 - 1.0).abs() < 1e-6, "{}", s.t_n);
    assert!((s.widom - 2.0).abs() < 1e-5);
}

#[test]
fn lawson_bernoulli_degree_two() {
    let s = solve_complex(&SetSpec::bernoulli(), 2, &SolverConfig::default()).unwrap();
    assert!(max_coeff_diff(&s.poly, &ComplexPoly::from_real(&[-1.0, 0.0, 1.0])) < 1e-5);
}

#[test]
fn lawson_odd_degree_on_period_two_set_is_bracketed() {
    let p = ComplexPoly::from_real(&[-3.0, 0.0, 1.0]);
    let spec = SetSpec::preimage(p);
    let cfg = SolverConfig::default();
    let s3 = solve_complex(&spec, 3, &cfg).unwrap();
    let t1 = solve(&spec, 1, &cfg).unwrap().t_n;
    let t2 = closed_form(&spec, 2).unwrap().unwrap().t_n;
    let cap = s3.capacity;
    assert!(s3.t_n >= cap.powi(3) * (1.0 - 1e-9));
    assert!(s3.t_n <= t1 * t2 * (1.0 + 1e-7), "{} vs {}", s3.t_n, t1 * t2);
}

#[test]
fn remez_examples() {
    let cfg = SolverConfig::default();
    let s = solve_real(&SetSpec::interval(-2.0, 2.0), 4, &cfg).unwrap();
    assert_eq!(s.method, Method::Remez);
    assert!((s.t_n - 2.0).abs() < 1e-10);
    assert!(max_coeff_diff(&s.poly, &ComplexPoly::from_real(&[2.0, 0.0, -4.0, 0.0, 1.0])) < 1e-9);

    let s = solve_real(&SetSpec::interval(-2.0, 2.0), 1, &cfg).unwrap();
    assert!((s.t_n - 2.0).abs() < 1e-12);
    assert!(s.poly.coeffs()[0].norm() < 1e-12);

    let r5 = 5f64.sqrt();
    let union = SetSpec::RealIntervalUnion {
        intervals: vec![[-r5, -1.0], [1.0, r5]],
    };
    let s = solve_real(&union, 2, &cfg).unwrap();
    assert!((s.t_n - 2.0).abs() < 1e-9, "{}", s.t_n);
    assert!(max_coeff_diff(&s.poly, &ComplexPoly::from_real(&[-3.0, 0.0, 1.0])) < 1e-8);
    assert_eq!(s.diagnostics.status, SolveStatus::Converged);
}

#[test]
fn remez_higher_degree_on_union() {
    let r5 = 5f64.sqrt();
    let union = SetSpec::RealIntervalUnion {
        intervals: vec![[-r5, -1.0], [1.0, r5]],
    };
    let cfg = SolverConfig::default();
    let s4 = solve_real(&union, 4, &cfg).unwrap();
    assert!((s4.t_n - 2.0).abs() < 1e-8);
    let s5 = solve_real(&union, 5, &cfg).unwrap();
    assert!(s5.widom >= 2.0 * (1.0 - 1e-6));
    assert!(s5.extreme_points.len() >= 6);
}

#[test]
fn lp_oracle_examples() {
    let disk = sets::sample_boundary(&SetSpec::unit_disk(), 256).unwrap();
    let out = lp_oracle(&disk, 2, 64).unwrap();
    assert!(out.t_n <= 1.0013 && out.t_n >= 1.0 - 1e-9, "{}", out.t_n);
    assert!(out.objective <= 1.0 + 1e-9);

    let iv = sets::sample_boundary(&SetSpec::interval(-2.0, 2.0), 400).unwrap();
    let out = lp_oracle(&iv, 3, 64).unwrap();
    assert!(out.t_n >= 2.0 - 1e-9 && out.t_n <= 2.01, "{}", out.t_n);

    let b = sets::sample_boundary(&SetSpec::bernoulli(), 400).unwrap();
    let out = lp_oracle(&b, 2, 64).unwrap();
    assert!(max_coeff_diff(&out.poly, &ComplexPoly::from_real(&[-1.0, 0.0, 1.0])) < 1e-3);
}

#[test]
fn lawson_within_lp_bracket() {
    let spec = SetSpec::square(1.0);
    let sample = sets::sample_boundary(&spec, 400).unwrap();
    let k = 64;
    let lp = lp_oracle(&sample, 4, k).unwrap();
    let cfg = SolverConfig {
        m0: 400,
        ..SolverConfig::default()
    };
    let s = solve_complex(&spec, 4, &cfg).unwrap();
    // Compare on the continuous boundary: polish the LP polynomial's maxima too.
    let lp_sup = sets::boundary_maxima(&sample, &lp.poly, &spec, 0.9)
        .unwrap()
        .iter()
        .map(|m| m.1)
        .fold(lp.t_n, f64::max);
    let lo = lp_sup * (std::f64::consts::PI / k as f64).cos();
    assert!(s.t_n >= lo && s.t_n <= lp_sup * (1.0 + 1e-6), "{} not in [{lo}, {lp_sup}]", s.t_n);
}

#[test]
fn certificate_on_level_set_of_period_two_set() {
    let p = ComplexPoly::from_real(&[-3.0, 0.0, 1.0]);
    let spec = sets::level_set(&SetSpec::preimage(p.clone()), 0.3).unwrap();
    let cert = certificate_check(&spec, &p, 1e-6).unwrap();
    assert_eq!(cert.verdict, CertificateVerdict::Certified);
    assert!((cert.norm - 2.0 * 0.6f64.cosh()).abs() < 1e-9);
}

#[test]
fn widom_factor_examples() {
    let iv = SetSpec::interval(-2.0, 2.0);
    for n in [1, 3, 7] {
        let s = closed_form(&iv, n).unwrap().unwrap();
        let w = widom_factor(&s, &iv).unwrap();
        assert!((w.value - 2.0).abs() < 1e-12);
        assert!(!w.estimated);
    }
    let e = SetSpec::ellipse(0.25);
    let s = closed_form(&e, 5).unwrap().unwrap();
    assert!((s.widom - (1.0 + (-2.5f64).exp())).abs() < 1e-12);
}

#[test]
fn closed_form_matches_interval_chebyshev_on_affine_image() {
    let spec = SetSpec::interval(1.0, 3.0);
    let s = closed_form(&spec, 6).unwrap().unwrap();
    assert!((s.t_n - 2.0 * 0.5f64.powi(6)).abs() < 1e-15);
    let direct = interval_chebyshev(6)
        .affine_substitute(c(2.0, 0.0), c(-4.0, 0.0))
        .scaled(c(0.5f64.powi(6), 0.0));
    assert!(max_coeff_diff(&s.poly, &direct) < 1e-10);
}

#[test]
fn degree_cap_is_enforced() {
    let cfg = SolverConfig::default();
    assert!(solve_complex(&SetSpec::square(1.0), 65, &cfg).is_err());
    assert!(solve_real(&SetSpec::interval(-1.0, 1.0), 0, &cfg).is_err());
}
