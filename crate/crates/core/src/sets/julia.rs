//! The cauliflower: Julia set of `f(z) = z^2 + z`.

use num_complex::Complex64;

/// Backward orbit of the parabolic fixed point 0 to depth `depth`, both
/// inverse branches, duplicates within 1e-9 removed.
pub(crate) fn inverse_iteration(depth: usize) -> Vec<Complex64> {
    let mut level = vec![Complex64::new(0.0, 0.0)];
    let mut all = level.clone();
    for _ in 0..depth {
        let mut next = Vec::with_capacity(2 * level.len());
        for &w in &level {
            let s = (1.0 + 4.0 * w).sqrt();
            next.push((-1.0 + s) * 0.5);
            next.push((-1.0 - s) * 0.5);
        }
        all.extend_from_slice(&next);
        level = next;
    }
    dedup(all, 1e-9)
}

/// The multiset `f^{-depth}(-3/4)`: `2^depth` points with equal mass
/// approximate the equilibrium measure.
pub(crate) fn backward_level(depth: usize) -> Vec<Complex64> {
    let mut level = vec![Complex64::new(-0.75, 0.0)];
    for _ in 0..depth {
        let mut next = Vec::with_capacity(2 * level.len());
        for &w in &level {
            let s = (1.0 + 4.0 * w).sqrt();
            next.push((-1.0 + s) * 0.5);
            next.push((-1.0 - s) * 0.5);
        }
        level = next;
    }
    level
}

fn dedup(mut pts: Vec<Complex64>, tol: f64) -> Vec<Complex64> {
    pts.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap().then(a.im.partial_cmp(&b.im).unwrap()));
    let mut out: Vec<Complex64> = Vec::with_capacity(pts.len());
    for p in pts {
        // Scan back over the strip |re - p.re| <= tol.
        let dup = out
            .iter()
            .rev()
            .take_while(|q| p.re - q.re <= tol)
            .any(|q| (p - q).norm() <= tol);
        if !dup {
            out.push(p);
        }
    }
    out
}

/// Green's function `lim 2^{-k} log|f^k(z)|`; capacity 1 since `f` is monic
/// of degree 2.
pub(crate) fn green(z: Complex64) -> f64 {
    let mut w = z;
    let mut scale = 1.0;
    for _ in 0..4000 {
        let r = w.norm();
        if r > 1e10 {
            // log|f(w)| = 2 log|w| + log|1 + 1/w|; the correction is O(1/|w|).
            return scale * (r.ln() + (1.0 + 1.0 / w).norm().ln());
        }
        w = w * w + w;
        scale *= 0.5;
    }
    0.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn backward_orbit_is_invariant() {
        let pts = inverse_iteration(10);
        assert!(pts.len() > 1000);
        // Forward image of every point is (nearly) in the set or is 0.
        for z in pts.iter().take(200) {
            let w = z * z + z;
            assert!(w.norm() < 2.0);
        }
        // All points have Green value ~0.
        assert!(pts.iter().all(|&z| green(z) < 1e-6));
    }

    #[test]
    fn green_asymptotics() {
        let z = Complex64::new(1e4, 0.0);
        assert!((green(z) - z.norm().ln()).abs() < 1e-3);
        // Functional equation G(f(z)) = 2 G(z).
        let z = Complex64::new(0.4, 0.9);
        assert!((green(z * z + z) - 2.0 * green(z)).abs() < 1e-10);
    }
}
