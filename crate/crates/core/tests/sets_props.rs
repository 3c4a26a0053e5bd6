use cheblab::sets::{self, joukowski_inverse, koch_vertices, SetSpec};
use cheblab::{Complex64, ComplexPoly};
use proptest::prelude::*;

fn real_quadratic() -> impl Strategy<Value = ComplexPoly> {
    // z^2 + b z - c with a gap: P^{-1}([-2,2]) splits when c + b^2/4 > 2.
    (-1.0f64..1.0, 2.2f64..5.0).prop_map(|(b, c)| ComplexPoly::from_real(&[-c, b, 1.0]))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn lemniscate_boundary_is_on_the_level_curve(
        roots in prop::collection::vec((-1.5f64..1.5, -1.5f64..1.5), 1..=3),
        alpha in 0.2f64..3.0,
    ) {
        let roots: Vec<Complex64> = roots.into_iter().map(|(a, b)| Complex64::new(a, b)).collect();
        let p = ComplexPoly::from_roots(&roots);
        let spec = SetSpec::lemniscate(p.clone(), alpha);
        let s = sets::sample_boundary(&spec, 256).unwrap();
        for z in &s.points {
            prop_assert!((p.eval(*z).norm() - alpha).abs() <= 1e-8 * alpha);
        }
    }

    #[test]
    fn ellipse_boundary_is_on_the_level_curve(alpha in 0.05f64..2.0) {
        let s = sets::sample_boundary(&SetSpec::ellipse(alpha), 256).unwrap();
        for z in &s.points {
            prop_assert!((joukowski_inverse(*z).norm() - alpha.exp()).abs() <= 1e-8 * alpha.exp());
        }
    }

    #[test]
    fn preimage_level_set_boundary_is_on_the_green_level(p in real_quadratic(), alpha in 0.05f64..1.0) {
        let base = SetSpec::preimage(p);
        let spec = sets::level_set(&base, alpha).unwrap();
        let s = sets::sample_boundary(&spec, 256).unwrap();
        for z in &s.points {
            let g = base.closed_green(*z).unwrap();
            prop_assert!((g - alpha).abs() <= 1e-8, "G = {} at {}", g, z);
        }
    }

    #[test]
    fn koch_sides_shrink_by_the_schedule(a in prop::collection::vec(0.05f64..=1.0, 3), depth in 1usize..=4) {
        let v = koch_vertices(&a, depth, sets::DEFAULT_KOCH_BETA);
        prop_assert_eq!(v.len(), 3 * 4usize.pow(depth as u32 - 1));
        let expected: f64 = a.iter().take(depth - 1).map(|aj| 0.5 * (1.0 - aj / 3.0)).product();
        for i in 0..v.len() {
            let side = (v[(i + 1) % v.len()] - v[i]).norm();
            prop_assert!((side - expected).abs() <= 1e-12, "side {} vs {}", side, expected);
        }
    }

    #[test]
    fn sampling_is_deterministic(h in 0.1f64..3.0, m in 16usize..500) {
        let spec = SetSpec::square(h);
        let a = sets::sample_boundary(&spec, m).unwrap();
        let b = sets::sample_boundary(&spec, m).unwrap();
        prop_assert_eq!(a.points, b.points);
        prop_assert_eq!(a.weights, b.weights);
    }
}
