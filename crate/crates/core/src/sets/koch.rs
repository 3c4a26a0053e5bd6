//! Koch antenna outlines.
//!
//! Stage 1 is the equilateral triangle with side 1. Stage `j + 1` replaces
//! every side of length `s` by four sides: an isosceles triangle with base
//! `a_j s / 3` is erected outward on the middle of the side, its equal sides
//! having length `(1 - a_j/3) s / 2`. With `a_j = 0` the triangle degenerates
//! to a perpendicular spike of length `beta * s`.

use num_complex::Complex64;

use super::SetSpec;
use crate::error::{Error, Result};

/// Counterclockwise vertex list of the stage-`depth` antenna.
pub fn koch_vertices(a_schedule: &[f64], depth: usize, beta: f64) -> Vec<Complex64> {
    let mut v = vec![
        Complex64::new(0.0, 0.0),
        Complex64::new(1.0, 0.0),
        Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_3),
    ];
    for &a in a_schedule.iter().take(depth.saturating_sub(1)) {
        let n = v.len();
        let mut next = Vec::with_capacity(4 * n);
        for i in 0..n {
            let p = v[i];
            let q = v[(i + 1) % n];
            let len = (q - p).norm();
            let dir = (q - p) / len;
            let outward = Complex64::new(0.0, -1.0) * dir;
            let mid = (p + q) * 0.5;
            let (half_base, height) = if a > 0.0 {
                let base = a * len / 3.0;
                let side = 0.5 * (1.0 - a / 3.0) * len;
                (0.5 * base, (side * side - 0.25 * base * base).max(0.0).sqrt())
            } else {
                (0.0, beta * len)
            };
            next.push(p);
            next.push(mid - dir * half_base);
            next.push(mid + outward * height);
            if half_base > 0.0 {
                next.push(mid + dir * half_base);
            } else {
                // Spike: come back down to the foot.
                next.push(mid);
            }
        }
        v = next;
    }
    v
}

pub(crate) fn vertices_for(spec: &SetSpec) -> Result<Vec<Complex64>> {
    match spec {
        SetSpec::KochAntenna {
            a_schedule,
            depth,
            beta,
        } => Ok(koch_vertices(a_schedule, *depth, *beta)),
        _ => Err(Error::InvalidSpec("not a Koch antenna".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sides(v: &[Complex64]) -> Vec<f64> {
        (0..v.len()).map(|i| (v[(i + 1) % v.len()] - v[i]).norm()).collect()
    }

    #[test]
    fn side_recursion_and_counts() {
        let a = [1.0, 0.5, 1.0 / 9.0];
        let mut s = 1.0;
        for j in 1..=4 {
            let v = koch_vertices(&a, j, 0.4);
            assert_eq!(v.len(), 3 * 4usize.pow(j as u32 - 1));
            for l in sides(&v) {
                assert!((l - s).abs() < 1e-13, "stage {j}: {l} vs {s}");
            }
            if j < 4 {
                s *= 0.5 * (1.0 - a[j - 1] / 3.0);
            }
        }
    }

    #[test]
    fn snowflake_stage_two_is_hexagram() {
        let v = koch_vertices(&[1.0], 2, 0.4);
        // The six star tips sit at distance 1/sqrt(3) * ... from the centroid:
        // all 12 vertices alternate between two radii.
        let c: Complex64 = Complex64::new(0.5, 0.5 / 3f64.sqrt());
        let mut radii: Vec<f64> = v.iter().map(|z| (z - c).norm()).collect();
        radii.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((radii[0] - radii[5]).abs() < 1e-13);
        assert!((radii[6] - radii[11]).abs() < 1e-13);
        assert!((radii[11] / radii[0] - 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn zero_schedule_builds_spikes() {
        let v = koch_vertices(&[0.0], 2, 0.25);
        assert_eq!(v.len(), 12);
        // Spike tip above the midpoint of the base edge, pointing outward.
        assert!((v[2] - Complex64::new(0.5, -0.25)).norm() < 1e-14);
    }
}
