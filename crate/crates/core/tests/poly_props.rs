use cheblab::poly::RootConfig;
use cheblab::{Complex64, ComplexPoly};
use proptest::prelude::*;

fn coeff() -> impl Strategy<Value = Complex64> {
    (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(a, b)| Complex64::new(a, b))
}

fn monic(deg: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = ComplexPoly> {
    deg.prop_flat_map(|d| prop::collection::vec(coeff(), d)).prop_map(|mut c| {
        c.push(Complex64::new(1.0, 0.0));
        ComplexPoly::new(c)
    })
}

/// Up to 20 points in the disk of radius 2, greedily thinned to pairwise
/// separation 0.1.
fn separated_roots() -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((0.0f64..2.0, 0.0f64..std::f64::consts::TAU), 1..=20).prop_map(|raw| {
        let mut out: Vec<Complex64> = Vec::new();
        for (r, t) in raw {
            let z = Complex64::from_polar(r, t);
            if out.iter().all(|w| (w - z).norm() >= 0.1) {
                out.push(z);
            }
        }
        out
    })
}

fn max_rel_diff(a: &ComplexPoly, b: &ComplexPoly) -> f64 {
    let n = a.coeffs().len().max(b.coeffs().len());
    let scale = a.scale().max(b.scale()).max(1e-300);
    (0..n)
        .map(|k| {
            let x = a.coeffs().get(k).copied().unwrap_or_default();
            let y = b.coeffs().get(k).copied().unwrap_or_default();
            (x - y).norm()
        })
        .fold(0.0, f64::max)
        / scale
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn roots_invert_expansion(roots in separated_roots()) {
        let p = ComplexPoly::from_roots(&roots);
        let found = p.roots(&RootConfig::default()).unwrap();
        prop_assert_eq!(found.total_multiplicity(), roots.len());
        let got = found.expanded();
        for r in &roots {
            let d = got.iter().map(|g| (g - r).norm()).fold(f64::INFINITY, f64::min);
            prop_assert!(d <= 1e-8, "root {} off by {:e}", r, d);
        }
    }

    #[test]
    fn compose_is_associative(f in monic(1..=3), g in monic(1..=3), h in monic(1..=3)) {
        let left = ComplexPoly::compose(&ComplexPoly::compose(&f, &g).unwrap(), &h).unwrap();
        let right = ComplexPoly::compose(&f, &ComplexPoly::compose(&g, &h).unwrap()).unwrap();
        prop_assert!(max_rel_diff(&left, &right) <= 1e-12);
    }

    #[test]
    fn compose_evaluates_as_nesting(
        f in monic(1..=5),
        g in monic(1..=5),
        pts in prop::collection::vec((0.0f64..1.5, 0.0f64..std::f64::consts::TAU), 100),
    ) {
        let fg = ComplexPoly::compose(&f, &g).unwrap();
        for (r, t) in pts {
            let z = Complex64::from_polar(r, t);
            let direct = fg.eval(z);
            let nested = f.eval(g.eval(z));
            // Relative to the size of the terms, which bounds the rounding.
            let size = fg.coeffs().iter().enumerate().map(|(k, c)| c.norm() * r.powi(k as i32)).sum::<f64>();
            prop_assert!((direct - nested).norm() <= 1e-10 * size.max(nested.norm()));
        }
    }
}
