//! Planar convex hulls (Andrew's monotone chain).

use num_complex::Complex64;

/// Convex hull as a counterclockwise vertex list. `degenerate` is set when all
/// input points are collinear; the hull is then the segment between the two
/// extreme vertices.
#[derive(Clone, Debug)]
pub struct Hull {
    pub vertices: Vec<Complex64>,
    pub degenerate: bool,
}

fn cross(o: Complex64, a: Complex64, b: Complex64) -> f64 {
    (a.re - o.re) * (b.im - o.im) - (a.im - o.im) * (b.re - o.re)
}

/// Convex hull of a point set. Needs at least one point; collinear input
/// yields a flagged segment hull.
pub fn convex_hull(points: &[Complex64]) -> Hull {
    let mut pts: Vec<Complex64> = points.to_vec();
    pts.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap().then(a.im.partial_cmp(&b.im).unwrap()));
    pts.dedup();
    if pts.len() < 3 {
        return Hull {
            vertices: pts,
            degenerate: true,
        };
    }
    let scale = pts
        .iter()
        .map(|p| (p - pts[0]).norm())
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    let tol = 1e-12 * scale * scale;

    let mut lower: Vec<Complex64> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= tol {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Complex64> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= tol {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);

    if lower.len() < 3 {
        // Collinear: keep the two extreme points.
        let first = pts[0];
        let last = *pts.last().unwrap();
        return Hull {
            vertices: vec![first, last],
            degenerate: true,
        };
    }
    Hull {
        vertices: lower,
        degenerate: false,
    }
}

fn segment_distance(z: Complex64, a: Complex64, b: Complex64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (z - a).norm();
    }
    let t = (((z - a) * ab.conj()).re / len2).clamp(0.0, 1.0);
    (z - (a + ab * t)).norm()
}

impl Hull {
    /// Distance by which `z` lies outside the hull (0 when inside).
    pub fn outside_distance(&self, z: Complex64) -> f64 {
        match self.vertices.len() {
            0 => f64::INFINITY,
            1 => (z - self.vertices[0]).norm(),
            2 => segment_distance(z, self.vertices[0], self.vertices[1]),
            n => {
                let inside = (0..n).all(|i| {
                    let a = self.vertices[i];
                    let b = self.vertices[(i + 1) % n];
                    cross(a, b, z) >= 0.0
                });
                if inside {
                    0.0
                } else {
                    (0..n)
                        .map(|i| segment_distance(z, self.vertices[i], self.vertices[(i + 1) % n]))
                        .fold(f64::INFINITY, f64::min)
                }
            }
        }
    }

    /// Membership with absolute slack.
    pub fn contains(&self, z: Complex64, slack: f64) -> bool {
        self.outside_distance(z) <= slack
    }

    pub fn diameter(&self) -> f64 {
        let v = &self.vertices;
        let mut d: f64 = 0.0;
        for i in 0..v.len() {
            for j in (i + 1)..v.len() {
                d = d.max((v[i] - v[j]).norm());
            }
        }
        d
    }

    /// Vertex centroid.
    pub fn center(&self) -> Complex64 {
        if self.vertices.is_empty() {
            return Complex64::new(0.0, 0.0);
        }
        self.vertices.iter().sum::<Complex64>() / self.vertices.len() as f64
    }

    /// `count` points on a circle of radius `factor * diameter` about the
    /// center; the default exterior test ring uses `factor = 2`.
    pub fn test_ring(&self, factor: f64, count: usize) -> Vec<Complex64> {
        let c = self.center();
        let r = factor * self.diameter().max(1e-12);
        (0..count)
            .map(|k| c + Complex64::from_polar(r, std::f64::consts::TAU * (k as f64 + 0.5) / count as f64))
            .collect()
    }
}
