//! Compact-set catalog: specifications, boundary sampling and refinement.
//!
//! Only outer boundaries are sampled. The sup norm of a polynomial over a
//! compact set equals its sup norm over the polynomial hull, so interior
//! structure never matters for the solvers.

mod curve;
pub mod hull;
mod julia;
mod koch;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{ComplexPoly, RootConfig};

pub use curve::joukowski_inverse;
pub use hull::{convex_hull, Hull};
pub use koch::koch_vertices;

/// Equal-mass backward orbit of depth `depth` for the cauliflower.
pub fn julia_backward_level(depth: usize) -> Vec<Complex64> {
    julia::backward_level(depth)
}

/// Refinement rounds allowed before a boundary is declared under-resolved.
pub const MAX_REFINE_ROUNDS: usize = 8;

/// Deepest backward-orbit level used when refining Julia samples.
const JULIA_REFINE_MAX_DEPTH: usize = 18;

/// Default shrink factor for degenerate Koch triangles (`a_j = 0`).
pub const DEFAULT_KOCH_BETA: f64 = 0.4;

fn default_beta() -> f64 {
    DEFAULT_KOCH_BETA
}

/// Tagged description of a compact planar set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant")]
pub enum SetSpec {
    Interval {
        a: f64,
        b: f64,
    },
    RealIntervalUnion {
        intervals: Vec<[f64; 2]>,
    },
    Disk {
        center: Complex64,
        radius: f64,
    },
    /// Closed region bounded by the ellipse with foci ±2 on which
    /// `|z(x)| = e^alpha`.
    ConfocalEllipse {
        alpha: f64,
    },
    /// `{z : |P(z)| <= alpha}`.
    Lemniscate {
        #[serde(rename = "P")]
        p: ComplexPoly,
        alpha: f64,
    },
    /// `P^{-1}([-2, 2])` for monic real `P`.
    PolynomialPreimage {
        #[serde(rename = "P")]
        p: ComplexPoly,
    },
    /// Region bounded by `{G_base = alpha}`.
    LevelSet {
        base: Box<SetSpec>,
        alpha: f64,
    },
    Polygon {
        vertices: Vec<Complex64>,
    },
    KochAntenna {
        a_schedule: Vec<f64>,
        depth: usize,
        #[serde(default = "default_beta")]
        beta: f64,
    },
    DiskPlusSpike {
        radius: f64,
        spike_end: f64,
    },
    /// Filled Julia set of `z^2 + z`.
    JuliaCauliflower {
        sample_depth: usize,
    },
}

fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidSpec(msg.into()))
}

fn finite(x: f64) -> bool {
    x.is_finite()
}

impl SetSpec {
    pub fn interval(a: f64, b: f64) -> Self {
        SetSpec::Interval { a, b }
    }

    pub fn disk(center: Complex64, radius: f64) -> Self {
        SetSpec::Disk { center, radius }
    }

    pub fn unit_disk() -> Self {
        SetSpec::Disk {
            center: Complex64::new(0.0, 0.0),
            radius: 1.0,
        }
    }

    pub fn ellipse(alpha: f64) -> Self {
        SetSpec::ConfocalEllipse { alpha }
    }

    pub fn lemniscate(p: ComplexPoly, alpha: f64) -> Self {
        SetSpec::Lemniscate { p, alpha }
    }

    /// The Bernoulli lemniscate `|z^2 - 1| <= 1`.
    pub fn bernoulli() -> Self {
        SetSpec::Lemniscate {
            p: ComplexPoly::from_real(&[-1.0, 0.0, 1.0]),
            alpha: 1.0,
        }
    }

    pub fn preimage(p: ComplexPoly) -> Self {
        SetSpec::PolynomialPreimage { p }
    }

    pub fn polygon(vertices: Vec<Complex64>) -> Self {
        SetSpec::Polygon { vertices }
    }

    /// Axis-aligned square `[-h, h]^2`.
    pub fn square(h: f64) -> Self {
        SetSpec::Polygon {
            vertices: vec![
                Complex64::new(-h, -h),
                Complex64::new(h, -h),
                Complex64::new(h, h),
                Complex64::new(-h, h),
            ],
        }
    }

    /// Equilateral triangle with unit circumradius, one vertex at 1.
    pub fn triangle() -> Self {
        SetSpec::Polygon {
            vertices: (0..3)
                .map(|k| Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / 3.0))
                .collect(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            SetSpec::Interval { .. } => "Interval",
            SetSpec::RealIntervalUnion { .. } => "RealIntervalUnion",
            SetSpec::Disk { .. } => "Disk",
            SetSpec::ConfocalEllipse { .. } => "ConfocalEllipse",
            SetSpec::Lemniscate { .. } => "Lemniscate",
            SetSpec::PolynomialPreimage { .. } => "PolynomialPreimage",
            SetSpec::LevelSet { .. } => "LevelSet",
            SetSpec::Polygon { .. } => "Polygon",
            SetSpec::KochAntenna { .. } => "KochAntenna",
            SetSpec::DiskPlusSpike { .. } => "DiskPlusSpike",
            SetSpec::JuliaCauliflower { .. } => "JuliaCauliflower",
        }
    }

    /// Short label for tables, e.g. `Lemniscate(deg 2, alpha 1)`.
    pub fn label(&self) -> String {
        match self {
            SetSpec::Interval { a, b } => format!("Interval[{a},{b}]"),
            SetSpec::RealIntervalUnion { intervals } => format!("RealIntervalUnion({} bands)", intervals.len()),
            SetSpec::Disk { center, radius } => format!("Disk({}{:+}i,{radius})", center.re, center.im),
            SetSpec::ConfocalEllipse { alpha } => format!("ConfocalEllipse({alpha})"),
            SetSpec::Lemniscate { p, alpha } => format!("Lemniscate(deg {},{alpha})", p.signed_degree()),
            SetSpec::PolynomialPreimage { p } => format!("PolynomialPreimage(deg {})", p.signed_degree()),
            SetSpec::LevelSet { base, alpha } => format!("LevelSet({},{alpha})", base.label()),
            SetSpec::Polygon { vertices } => format!("Polygon({} vertices)", vertices.len()),
            SetSpec::KochAntenna { depth, .. } => format!("KochAntenna(depth {depth})"),
            SetSpec::DiskPlusSpike { radius, spike_end } => format!("DiskPlusSpike({radius},{spike_end})"),
            SetSpec::JuliaCauliflower { sample_depth } => format!("JuliaCauliflower({sample_depth})"),
        }
    }

    /// Checks per-variant parameter validity.
    pub fn validate(&self) -> Result<()> {
        match self {
            SetSpec::Interval { a, b } => {
                if !(finite(*a) && finite(*b) && a < b) {
                    return invalid(format!("Interval needs finite a < b, got [{a}, {b}]"));
                }
            }
            SetSpec::RealIntervalUnion { intervals } => {
                if intervals.is_empty() {
                    return invalid("RealIntervalUnion needs at least one interval");
                }
                for (i, iv) in intervals.iter().enumerate() {
                    if !(finite(iv[0]) && finite(iv[1]) && iv[0] < iv[1]) {
                        return invalid(format!("interval {i} is not a finite a < b"));
                    }
                    if i > 0 && intervals[i - 1][1] >= iv[0] {
                        return invalid("intervals must be disjoint and in increasing order");
                    }
                }
            }
            SetSpec::Disk { center, radius } => {
                if !(finite(center.re) && finite(center.im) && *radius > 0.0 && finite(*radius)) {
                    return invalid("Disk needs a finite center and radius > 0");
                }
            }
            SetSpec::ConfocalEllipse { alpha } => {
                if !(*alpha > 0.0 && finite(*alpha)) {
                    return invalid("ConfocalEllipse needs alpha > 0");
                }
            }
            SetSpec::Lemniscate { p, alpha } => {
                if p.signed_degree() < 1 || !p.is_monic() {
                    return invalid("Lemniscate needs a monic polynomial of degree >= 1");
                }
                if !(*alpha > 0.0 && finite(*alpha)) {
                    return invalid("Lemniscate needs alpha > 0");
                }
            }
            SetSpec::PolynomialPreimage { p } => {
                if p.signed_degree() < 1 || !p.is_monic() {
                    return invalid("PolynomialPreimage needs a monic polynomial of degree >= 1");
                }
                if !p.is_real(0.0) {
                    return invalid("PolynomialPreimage needs real coefficients");
                }
            }
            SetSpec::LevelSet { base, alpha } => {
                if !(*alpha > 0.0 && finite(*alpha)) {
                    return invalid("LevelSet needs alpha > 0");
                }
                base.validate()?;
            }
            SetSpec::Polygon { vertices } => {
                if vertices.len() < 3 {
                    return invalid("Polygon needs at least 3 vertices");
                }
                if vertices.iter().any(|v| !finite(v.re) || !finite(v.im)) {
                    return invalid("Polygon vertices must be finite");
                }
                if polygon_signed_area(vertices).abs() < 1e-14 {
                    return invalid("Polygon has zero area");
                }
                if vertices.len() <= 4096 && !polygon_is_simple(vertices) {
                    return invalid("Polygon is not simple");
                }
            }
            SetSpec::KochAntenna {
                a_schedule,
                depth,
                beta,
            } => {
                if *depth < 1 {
                    return invalid("KochAntenna depth must be >= 1");
                }
                if *depth > 9 {
                    return invalid("KochAntenna depth above 9 exceeds the sampling budget");
                }
                if a_schedule.len() + 1 < *depth {
                    return invalid(format!(
                        "KochAntenna depth {depth} needs {} schedule entries, got {}",
                        depth - 1,
                        a_schedule.len()
                    ));
                }
                if a_schedule.iter().any(|a| !(0.0..=1.0).contains(a)) {
                    return invalid("KochAntenna schedule entries must lie in [0, 1]");
                }
                if !(*beta > 0.0 && *beta <= 0.5) {
                    return invalid("KochAntenna beta must lie in (0, 1/2]");
                }
            }
            SetSpec::DiskPlusSpike { radius, spike_end } => {
                if !(*radius > 0.0 && spike_end > radius && finite(*spike_end)) {
                    return invalid("DiskPlusSpike needs 0 < radius < spike_end");
                }
            }
            SetSpec::JuliaCauliflower { sample_depth } => {
                if *sample_depth < 4 || *sample_depth > 22 {
                    return invalid("JuliaCauliflower sample_depth must lie in 4..=22");
                }
            }
        }
        Ok(())
    }

    /// Real intervals making up the set when it is a subset of the real line.
    /// Touching bands of a polynomial preimage are merged.
    pub fn real_intervals(&self) -> Option<Vec<(f64, f64)>> {
        match self {
            SetSpec::Interval { a, b } => Some(vec![(*a, *b)]),
            SetSpec::RealIntervalUnion { intervals } => Some(intervals.iter().map(|iv| (iv[0], iv[1])).collect()),
            SetSpec::PolynomialPreimage { p } => preimage_bands(p).ok().flatten(),
            _ => None,
        }
    }

    /// Degree of the polynomial map defining a lemniscate or preimage family.
    pub fn map_degree(&self) -> Option<usize> {
        match self {
            SetSpec::Lemniscate { p, .. } | SetSpec::PolynomialPreimage { p } => p.degree(),
            _ => None,
        }
    }

    /// Green's function with pole at infinity, where the family has an
    /// explicit formula. Returns `None` for families modelled empirically.
    pub fn closed_green(&self, z: Complex64) -> Option<f64> {
        match self {
            SetSpec::Interval { a, b } => Some(interval_green(*a, *b, z)),
            SetSpec::RealIntervalUnion { intervals } if intervals.len() == 1 => {
                Some(interval_green(intervals[0][0], intervals[0][1], z))
            }
            SetSpec::Disk { center, radius } => Some(((z - center).norm() / radius).ln().max(0.0)),
            SetSpec::ConfocalEllipse { alpha } => Some((log_abs_joukowski(z) - alpha).max(0.0)),
            SetSpec::Lemniscate { p, alpha } => {
                let d = p.degree()? as f64;
                let v = p.eval(z).norm();
                Some(((v / alpha).ln() / d).max(0.0))
            }
            SetSpec::PolynomialPreimage { p } => {
                let d = p.degree()? as f64;
                Some(log_abs_joukowski(p.eval(z)) / d)
            }
            SetSpec::LevelSet { base, alpha } => base.closed_green(z).map(|g| (g - alpha).max(0.0)),
            SetSpec::JuliaCauliflower { .. } => Some(julia::green(z)),
            _ => None,
        }
    }

    /// Logarithmic capacity where a closed form exists.
    pub fn closed_capacity(&self) -> Option<f64> {
        match self {
            SetSpec::Interval { a, b } => Some((b - a) / 4.0),
            SetSpec::RealIntervalUnion { intervals } if intervals.len() == 1 => {
                Some((intervals[0][1] - intervals[0][0]) / 4.0)
            }
            SetSpec::Disk { radius, .. } => Some(*radius),
            SetSpec::ConfocalEllipse { alpha } => Some(alpha.exp()),
            SetSpec::Lemniscate { p, alpha } => Some(alpha.powf(1.0 / p.degree()? as f64)),
            SetSpec::PolynomialPreimage { .. } => Some(1.0),
            SetSpec::LevelSet { base, alpha } => base.closed_capacity().map(|c| c * alpha.exp()),
            SetSpec::JuliaCauliflower { .. } => Some(1.0),
            _ => None,
        }
    }

    /// Membership test. `slack` is a Green's-function level for families with
    /// a closed-form Green function and a Euclidean distance otherwise.
    pub fn contains(&self, z: Complex64, slack: f64) -> bool {
        match self {
            SetSpec::Interval { a, b } => z.im.abs() <= slack && z.re >= a - slack && z.re <= b + slack,
            SetSpec::RealIntervalUnion { intervals } => intervals
                .iter()
                .any(|iv| z.im.abs() <= slack && z.re >= iv[0] - slack && z.re <= iv[1] + slack),
            SetSpec::Disk { center, radius } => (z - center).norm() <= radius + slack,
            SetSpec::Polygon { vertices } => point_in_polygon(vertices, z) || polygon_distance(vertices, z) <= slack,
            SetSpec::KochAntenna { .. } => match koch::vertices_for(self) {
                Ok(v) => point_in_polygon(&v, z) || polygon_distance(&v, z) <= slack,
                Err(_) => false,
            },
            SetSpec::DiskPlusSpike { radius, spike_end } => {
                z.norm() <= radius + slack
                    || (z.im.abs() <= slack && z.re >= radius - slack && z.re <= spike_end + slack)
            }
            SetSpec::LevelSet { base, alpha } if base.closed_green(z).is_none() => {
                // Empirical level set: compare against the Leja Green model.
                match crate::potential::GreenModel::for_spec(base) {
                    Ok(m) => m.green(z) <= alpha + slack,
                    Err(_) => false,
                }
            }
            _ => self.closed_green(z).map(|g| g <= slack).unwrap_or(false),
        }
    }

    /// Whether the set is invariant under `z -> -z` (checked structurally).
    pub fn is_odd_symmetric(&self) -> bool {
        match self {
            SetSpec::Interval { a, b } => (a + b).abs() < 1e-14,
            SetSpec::RealIntervalUnion { intervals } => {
                let n = intervals.len();
                (0..n).all(|i| {
                    let j = n - 1 - i;
                    (intervals[i][0] + intervals[j][1]).abs() < 1e-12
                })
            }
            SetSpec::Disk { center, .. } => center.norm() < 1e-14,
            SetSpec::ConfocalEllipse { .. } => true,
            SetSpec::Lemniscate { p, .. } | SetSpec::PolynomialPreimage { p } => {
                // P(-z) = ±P(z) up to sign: only same-parity coefficients.
                let d = p.degree().unwrap_or(0);
                p.coeffs()
                    .iter()
                    .enumerate()
                    .all(|(k, c)| (k + d) % 2 == 0 || c.norm() == 0.0)
            }
            SetSpec::LevelSet { base, .. } => base.is_odd_symmetric(),
            SetSpec::Polygon { vertices } => closed_under(vertices, |z| -z),
            _ => false,
        }
    }

    /// Whether the set is invariant under complex conjugation (checked
    /// structurally).
    pub fn is_conjugation_symmetric(&self) -> bool {
        match self {
            SetSpec::Interval { .. }
            | SetSpec::RealIntervalUnion { .. }
            | SetSpec::ConfocalEllipse { .. }
            | SetSpec::PolynomialPreimage { .. }
            | SetSpec::DiskPlusSpike { .. }
            | SetSpec::JuliaCauliflower { .. } => true,
            SetSpec::Disk { center, .. } => center.im == 0.0,
            SetSpec::Lemniscate { p, .. } => p.is_real(0.0),
            SetSpec::LevelSet { base, .. } => base.is_conjugation_symmetric(),
            SetSpec::Polygon { vertices } => closed_under(vertices, |z| z.conj()),
            _ => false,
        }
    }
}

fn interval_green(a: f64, b: f64, z: Complex64) -> f64 {
    let c = 0.5 * (a + b);
    let rho = 0.25 * (b - a);
    log_abs_joukowski((z - c) / rho)
}

/// `log|z(x)|` for the Joukowski inverse, never negative.
fn log_abs_joukowski(x: Complex64) -> f64 {
    joukowski_inverse(x).norm().ln().max(0.0)
}

/// Bands of `P^{-1}([-2,2])` when every preimage point is real. Returns
/// `Ok(None)` when the preimage leaves the real line.
pub(crate) fn preimage_bands(p: &ComplexPoly) -> Result<Option<Vec<(f64, f64)>>> {
    let d = p.degree().ok_or_else(|| Error::InvalidSpec("zero polynomial".into()))?;
    if !p.is_real(0.0) {
        return Ok(None);
    }
    let cfg = RootConfig::default();
    let mut ends: Vec<f64> = Vec::with_capacity(2 * d);
    for shift in [2.0, -2.0] {
        let q = p - &ComplexPoly::constant(Complex64::new(shift, 0.0));
        let rs = q.roots(&cfg)?;
        for r in rs.expanded() {
            if r.im.abs() > 1e-7 * (1.0 + r.norm()) {
                return Ok(None);
            }
            ends.push(r.re);
        }
    }
    ends.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut bands: Vec<(f64, f64)> = ends.chunks(2).map(|c| (c[0], c[1])).collect();
    // Merge bands closed by a double root of P ± 2.
    let mut merged: Vec<(f64, f64)> = Vec::new();
    for b in bands.drain(..) {
        if let Some(last) = merged.last_mut() {
            if b.0 - last.1 <= 1e-7 * (1.0 + b.0.abs()) {
                last.1 = b.1;
                continue;
            }
        }
        merged.push(b);
    }
    Ok(Some(merged))
}

pub(crate) fn polygon_signed_area(v: &[Complex64]) -> f64 {
    let n = v.len();
    (0..n)
        .map(|i| {
            let a = v[i];
            let b = v[(i + 1) % n];
            a.re * b.im - a.im * b.re
        })
        .sum::<f64>()
        / 2.0
}

fn segments_cross(p1: Complex64, p2: Complex64, q1: Complex64, q2: Complex64) -> bool {
    let orient = |a: Complex64, b: Complex64, c: Complex64| (b - a).re * (c - a).im - (b - a).im * (c - a).re;
    let d1 = orient(q1, q2, p1);
    let d2 = orient(q1, q2, p2);
    let d3 = orient(p1, p2, q1);
    let d4 = orient(p1, p2, q2);
    ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
}

fn polygon_is_simple(v: &[Complex64]) -> bool {
    let n = v.len();
    for i in 0..n {
        for j in (i + 2)..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            if segments_cross(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n]) {
                return false;
            }
        }
    }
    true
}

/// Even-odd point-in-polygon test.
pub(crate) fn point_in_polygon(v: &[Complex64], z: Complex64) -> bool {
    let n = v.len();
    let mut inside = false;
    let mut j = n - 1;
    for i in 0..n {
        let (a, b) = (v[i], v[j]);
        if (a.im > z.im) != (b.im > z.im) {
            let x = (b.re - a.re) * (z.im - a.im) / (b.im - a.im) + a.re;
            if z.re < x {
                inside = !inside;
            }
        }
        j = i;
    }
    inside
}

pub(crate) fn polygon_distance(v: &[Complex64], z: Complex64) -> f64 {
    let n = v.len();
    (0..n)
        .map(|i| {
            let a = v[i];
            let b = v[(i + 1) % n];
            let ab = b - a;
            let t = (((z - a) * ab.conj()).re / ab.norm_sqr()).clamp(0.0, 1.0);
            (z - (a + ab * t)).norm()
        })
        .fold(f64::INFINITY, f64::min)
}

/// Level set `{G_spec = alpha}` of a set, with nesting collapsed by
/// `(e^a)^b = e^{a+b}`. Disks, ellipses and lemniscates map to their own
/// family.
pub fn level_set(spec: &SetSpec, alpha: f64) -> Result<SetSpec> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return invalid(format!("level set parameter must be > 0, got {alpha}"));
    }
    spec.validate()?;
    Ok(match spec {
        SetSpec::LevelSet { base, alpha: a0 } => SetSpec::LevelSet {
            base: base.clone(),
            alpha: a0 + alpha,
        },
        SetSpec::Disk { center, radius } => SetSpec::Disk {
            center: *center,
            radius: radius * alpha.exp(),
        },
        SetSpec::ConfocalEllipse { alpha: a0 } => SetSpec::ConfocalEllipse { alpha: a0 + alpha },
        SetSpec::Lemniscate { p, alpha: a0 } => {
            let d = p.degree().unwrap_or(1) as f64;
            SetSpec::Lemniscate {
                p: p.clone(),
                alpha: a0 * (d * alpha).exp(),
            }
        }
        other => SetSpec::LevelSet {
            base: Box::new(other.clone()),
            alpha,
        },
    })
}

/// One sample point's position in parameter space.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct ParamTag {
    pub comp: u32,
    pub u: f64,
}

/// Weighted discretization of an outer boundary.
#[derive(Clone, Debug)]
pub struct BoundarySample {
    pub points: Vec<Complex64>,
    /// Local arc-length proxies.
    pub weights: Vec<f64>,
    /// Parameter-measure weights; for the preimage and lemniscate families this
    /// is a discrete equilibrium measure. Used to seed the Lawson weights.
    pub param_weights: Vec<f64>,
    pub generation: usize,
    tags: Vec<ParamTag>,
    julia_depth: usize,
}

impl BoundarySample {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Builds an unstructured sample from explicit points (no refinement
    /// support); weights are uniform.
    pub fn from_points(points: Vec<Complex64>) -> Self {
        let n = points.len().max(1) as f64;
        BoundarySample {
            weights: vec![1.0 / n; points.len()],
            param_weights: vec![1.0 / n; points.len()],
            points,
            generation: 0,
            tags: Vec::new(),
            julia_depth: 0,
        }
    }

    /// Maximum of `|p|` over the sample.
    pub fn max_abs(&self, p: &ComplexPoly) -> f64 {
        self.points.iter().map(|&z| p.eval(z).norm()).fold(0.0, f64::max)
    }
}

/// Whether the image of every vertex under `f` is again a vertex.
fn closed_under(vertices: &[Complex64], f: impl Fn(Complex64) -> Complex64) -> bool {
    let scale = vertices.iter().map(|z| z.norm()).fold(1.0, f64::max);
    vertices
        .iter()
        .all(|&v| vertices.iter().any(|&w| (f(v) - w).norm() <= 1e-14 * scale))
}

/// Samples the outer boundary of `spec` with about `m` points (exactly `m`
/// for single-branch curves; lemniscates and preimages round up to a
/// multiple of the map degree).
pub fn sample_boundary(spec: &SetSpec, m: usize) -> Result<BoundarySample> {
    if m < 16 {
        return Err(Error::SampleTooSmall { got: m, need: 16 });
    }
    spec.validate()?;
    if let SetSpec::JuliaCauliflower { sample_depth } = spec {
        let depth = (*sample_depth).max((m as f64).log2().ceil() as usize);
        let points = julia::inverse_iteration(depth);
        let n = points.len() as f64;
        return Ok(BoundarySample {
            weights: vec![1.0 / n; points.len()],
            param_weights: vec![1.0 / n; points.len()],
            points,
            generation: 0,
            tags: Vec::new(),
            julia_depth: depth,
        });
    }
    let curves = curve::Parameterization::for_spec(spec)?;
    curves.sample(m)
}

/// Evaluates `|p|` on a four-times finer parameter grid around the local
/// maxima of `|p|` and inserts points that exceed the current discrete
/// maximum by more than `tol` (relative). Returns the new sample and the
/// number of inserted points.
pub fn refine_boundary(
    sample: &BoundarySample,
    p: &ComplexPoly,
    spec: &SetSpec,
    tol: f64,
) -> Result<(BoundarySample, usize)> {
    if sample.generation >= MAX_REFINE_ROUNDS {
        return Err(Error::RefinementCap {
            rounds: MAX_REFINE_ROUNDS,
        });
    }
    let current = sample.max_abs(p);
    let threshold = current * (1.0 + tol);
    if let SetSpec::JuliaCauliflower { .. } = spec {
        let depth = sample.julia_depth.max((sample.julia_depth + 2).min(JULIA_REFINE_MAX_DEPTH));
        let mut out = sample.clone();
        out.generation += 1;
        out.julia_depth = depth;
        let w = out.weights.iter().cloned().fold(f64::INFINITY, f64::min);
        let mut inserted = 0;
        for z in julia::inverse_iteration(depth) {
            if p.eval(z).norm() > threshold {
                out.points.push(z);
                out.weights.push(w);
                out.param_weights.push(w);
                inserted += 1;
            }
        }
        return Ok((out, inserted));
    }
    if sample.tags.is_empty() {
        return Err(Error::Unsupported(
            "refinement needs a parameterized boundary sample".into(),
        ));
    }
    let curves = curve::Parameterization::for_spec(spec)?;
    curves.refine(sample, p, threshold)
}

/// Local maxima of `|p|` along the boundary with value at least
/// `band * max`, polished by golden section in the boundary parameter.
/// Unstructured samples return their points above the band unpolished.
pub fn boundary_maxima(
    sample: &BoundarySample,
    p: &ComplexPoly,
    spec: &SetSpec,
    band: f64,
) -> Result<Vec<(Complex64, f64)>> {
    if sample.tags.is_empty() {
        let current = sample.max_abs(p);
        return Ok(sample
            .points
            .iter()
            .map(|&z| (z, p.eval(z).norm()))
            .filter(|&(_, v)| v >= band * current)
            .collect());
    }
    curve::Parameterization::for_spec(spec)?.maxima(sample, p, band)
}
