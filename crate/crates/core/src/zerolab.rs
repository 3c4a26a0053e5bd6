//! Zero-counting measures of Chebyshev polynomials: local counts, hull
//! confinement, exterior potential matching and n-th root asymptotics.

use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chebsolve::{self, ChebyshevSolution, SolverConfig};
use crate::error::{Error, Result};
use crate::io::fmt_f64;
use crate::poly::RootConfig;
use crate::potential::{self, EmpiricalMeasure, GreenModel};
use crate::sets::{self, SetSpec};

/// Atoms this close to a region's boundary count as inside.
pub const BOUNDARY_TOL: f64 = 1e-9;

/// Boundary sample size for hull and distance computations.
const BOUNDARY_POINTS: usize = 4096;

/// Equilibrium-measure atoms used for the reference mass of a region.
const EQUILIBRIUM_ATOMS: usize = 512;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape")]
pub enum RegionSpec {
    Disk {
        center: Complex64,
        radius: f64,
    },
    /// Axis-aligned rectangle spanned by two opposite corners.
    Rectangle {
        corners: [Complex64; 2],
    },
    /// Points within `width` of the outer boundary of the set under study.
    BoundaryBand {
        width: f64,
    },
}

impl RegionSpec {
    pub fn disk(center: Complex64, radius: f64) -> Self {
        RegionSpec::Disk { center, radius }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match self {
            RegionSpec::Disk { center, radius } => *radius > 0.0 && radius.is_finite() && center.is_finite(),
            RegionSpec::Rectangle { corners: [a, b] } => {
                a.is_finite() && b.is_finite() && (a.re - b.re).abs() > 0.0 && (a.im - b.im).abs() > 0.0
            }
            RegionSpec::BoundaryBand { width } => *width > 0.0 && width.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidSpec(format!("region {self:?} has no interior")))
        }
    }

    /// Fixes the geometry; a boundary band needs the set it follows.
    pub fn resolve(&self, set: Option<&SetSpec>) -> Result<Region> {
        self.validate()?;
        let boundary = match (self, set) {
            (RegionSpec::BoundaryBand { .. }, Some(s)) => sets::sample_boundary(s, BOUNDARY_POINTS)?.points,
            (RegionSpec::BoundaryBand { .. }, None) => {
                return Err(Error::InvalidSpec("a boundary band needs a set".into()));
            }
            _ => Vec::new(),
        };
        Ok(Region {
            spec: self.clone(),
            boundary,
        })
    }
}

/// A region with its geometry fixed.
#[derive(Clone, Debug)]
pub struct Region {
    spec: RegionSpec,
    boundary: Vec<Complex64>,
}

impl Region {
    pub fn spec(&self) -> &RegionSpec {
        &self.spec
    }

    /// Interior membership, with atoms within [`BOUNDARY_TOL`] of the
    /// boundary counted inside.
    pub fn contains(&self, z: Complex64) -> bool {
        match &self.spec {
            RegionSpec::Disk { center, radius } => (z - center).norm() <= radius + BOUNDARY_TOL,
            RegionSpec::Rectangle { corners: [a, b] } => {
                let (x0, x1) = (a.re.min(b.re), a.re.max(b.re));
                let (y0, y1) = (a.im.min(b.im), a.im.max(b.im));
                z.re >= x0 - BOUNDARY_TOL
                    && z.re <= x1 + BOUNDARY_TOL
                    && z.im >= y0 - BOUNDARY_TOL
                    && z.im <= y1 + BOUNDARY_TOL
            }
            RegionSpec::BoundaryBand { width } => nearest(&self.boundary, z) <= width + BOUNDARY_TOL,
        }
    }
}

fn nearest(points: &[Complex64], z: Complex64) -> f64 {
    points.iter().map(|p| (z - p).norm()).fold(f64::INFINITY, f64::min)
}

/// `(1/n) sum delta_{w_j}` over the zeros of the solution, with repeated
/// zeros merged into one atom of mass `multiplicity / n`.
pub fn zero_measure(sol: &ChebyshevSolution) -> Result<EmpiricalMeasure> {
    let n = sol.n;
    if n == 0 {
        return Err(Error::InvalidSpec("a constant has no zero measure".into()));
    }
    let roots = sol.poly.roots(&RootConfig::default())?;
    let atoms = roots.roots.iter().map(|r| r.value).collect();
    let masses = roots.roots.iter().map(|r| r.multiplicity as f64 / n as f64).collect();
    Ok(EmpiricalMeasure {
        atoms,
        masses,
        count: Some(n),
    })
}

/// Mass of the atoms inside the region.
pub fn count_in_region(mu: &EmpiricalMeasure, region: &Region) -> f64 {
    mu.atoms
        .iter()
        .zip(&mu.masses)
        .filter(|(a, _)| region.contains(**a))
        .fold(0.0, |acc, (_, m)| acc + m)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FejerReport {
    pub pass: bool,
    /// Largest distance of an atom outside the sampled hull.
    pub max_violation: f64,
    pub slack: f64,
}

/// Checks that every atom lies in the convex hull of the set, with slack
/// `1e-6` times the hull diameter.
pub fn fejer_check(mu: &EmpiricalMeasure, spec: &SetSpec) -> Result<FejerReport> {
    let sample = sets::sample_boundary(spec, BOUNDARY_POINTS)?;
    let hull = sets::convex_hull(&sample.points);
    let slack = 1e-6 * hull.diameter();
    let max_violation = mu
        .atoms
        .iter()
        .map(|&a| hull.outside_distance(a))
        .fold(0.0, f64::max);
    Ok(FejerReport {
        pass: max_violation <= slack,
        max_violation,
        slack,
    })
}

/// Number of zeros, with multiplicity, in `{z : dist(z, set) >= margin}`
/// intersected with the convex hull.
pub fn exterior_count(mu: &EmpiricalMeasure, spec: &SetSpec, margin: f64) -> Result<usize> {
    if !(margin > 0.0) {
        return Err(Error::InvalidSpec(format!("margin must be positive, got {margin}")));
    }
    let sample = sets::sample_boundary(spec, BOUNDARY_POINTS)?;
    let hull = sets::convex_hull(&sample.points);
    let slack = 1e-6 * hull.diameter();
    let total = mu.count.unwrap_or(mu.len()) as f64;
    let mut count = 0;
    for (&a, &m) in mu.atoms.iter().zip(&mu.masses) {
        if !hull.contains(a, slack) || spec.contains(a, 0.0) {
            continue;
        }
        if nearest(&sample.points, a) >= margin {
            count += (m * total).round() as usize;
        }
    }
    Ok(count)
}

/// `max | |T_n(z)|^{1/n} / (C e^{G(z)}) - 1 |` over exterior test points.
pub fn nthroot_asymptotics(sol: &ChebyshevSolution, model: &GreenModel, test_points: &[Complex64]) -> Result<f64> {
    if sol.n == 0 {
        return Err(Error::InvalidSpec("degree must be positive".into()));
    }
    let mut worst: f64 = 0.0;
    for &z in test_points {
        if model.hull().contains(z, 1e-9) {
            return Err(Error::InsideHull { re: z.re, im: z.im });
        }
        let log_ratio = sol.poly.eval(z).norm().ln() / sol.n as f64 - model.capacity.ln() - model.green(z);
        worst = worst.max(log_ratio.exp_m1().abs());
    }
    Ok(worst)
}

fn default_vanishing() -> f64 {
    0.005
}
fn default_positive() -> f64 {
    0.02
}
fn default_trend_slack() -> f64 {
    0.01
}
fn default_ring_points() -> usize {
    64
}

/// Verdict thresholds on the fraction of zeros in a region.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityThresholds {
    /// Below this on the top half of the degrees: vanishing.
    #[serde(default = "default_vanishing")]
    pub vanishing: f64,
    /// At or above this on the top half, with no drop larger than
    /// `trend_slack` between consecutive degrees: positive.
    #[serde(default = "default_positive")]
    pub positive: f64,
    #[serde(default = "default_trend_slack")]
    pub trend_slack: f64,
}

impl Default for DensityThresholds {
    fn default() -> Self {
        DensityThresholds {
            vanishing: default_vanishing(),
            positive: default_positive(),
            trend_slack: default_trend_slack(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DensityConfig {
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default)]
    pub thresholds: DensityThresholds,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DensityVerdict {
    DensityPositive,
    DensityVanishing,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MissingDegree {
    pub n: usize,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityReport {
    pub set: String,
    pub region: RegionSpec,
    pub n_values: Vec<usize>,
    pub region_fractions: Vec<f64>,
    /// Minimum fraction over the top half of the solved degrees.
    pub liminf_estimate: f64,
    /// Balayage residuals at the far test ring.
    pub potential_residuals: Vec<f64>,
    pub converged: Vec<bool>,
    /// Mass the equilibrium measure puts in the region.
    pub equilibrium_fraction: Option<f64>,
    pub thresholds: DensityThresholds,
    pub verdict: DensityVerdict,
    pub missing: Vec<MissingDegree>,
    /// Zero measures of the solved degrees, in `n_values` order.
    #[serde(skip)]
    pub measures: Vec<EmpiricalMeasure>,
}

struct DensityRow {
    fraction: f64,
    residual: f64,
    converged: bool,
    mu: EmpiricalMeasure,
}

/// Solves for each degree (in parallel), then tabulates region fractions,
/// exterior potential residuals and a threshold verdict. A failed solve
/// marks its degree missing.
pub fn density_experiment(
    spec: &SetSpec,
    region: &RegionSpec,
    n_list: &[usize],
    cfg: &DensityConfig,
) -> Result<DensityReport> {
    cfg.solver.validate()?;
    let resolved = region.resolve(Some(spec))?;
    let model = GreenModel::for_spec(spec)?;
    let ring = model.hull().test_ring(2.0, default_ring_points());
    let mut degrees = n_list.to_vec();
    degrees.sort_unstable();
    degrees.dedup();

    let rows: Vec<(usize, Result<DensityRow>)> = degrees
        .par_iter()
        .map(|&n| {
            let row = (|| {
                let sol = chebsolve::solve(spec, n, &cfg.solver)?;
                let mu = zero_measure(&sol)?;
                Ok(DensityRow {
                    fraction: count_in_region(&mu, &resolved),
                    residual: potential::balayage_residual_with(&mu, &model, &ring)?,
                    converged: sol.is_converged(),
                    mu,
                })
            })();
            (n, row)
        })
        .collect();

    let mut report = DensityReport {
        set: spec.label(),
        region: region.clone(),
        n_values: Vec::new(),
        region_fractions: Vec::new(),
        liminf_estimate: f64::NAN,
        potential_residuals: Vec::new(),
        converged: Vec::new(),
        equilibrium_fraction: None,
        thresholds: cfg.thresholds.clone(),
        verdict: DensityVerdict::Inconclusive,
        missing: Vec::new(),
        measures: Vec::new(),
    };
    for (n, row) in rows {
        match row {
            Ok(r) => {
                report.n_values.push(n);
                report.region_fractions.push(r.fraction);
                report.potential_residuals.push(r.residual);
                report.converged.push(r.converged);
                report.measures.push(r.mu);
            }
            Err(e) => report.missing.push(MissingDegree { n, reason: e.to_string() }),
        }
    }
    if let Ok(eq) = potential::equilibrium_measure(spec, EQUILIBRIUM_ATOMS) {
        report.equilibrium_fraction = Some(count_in_region(&eq, &resolved));
    }
    let (liminf, verdict) = density_verdict(&report.region_fractions, &cfg.thresholds);
    report.liminf_estimate = liminf;
    report.verdict = verdict;
    Ok(report)
}

/// Verdict from fractions ordered by degree; judged on the top half.
pub fn density_verdict(fractions: &[f64], th: &DensityThresholds) -> (f64, DensityVerdict) {
    if fractions.is_empty() {
        return (f64::NAN, DensityVerdict::Inconclusive);
    }
    let top = &fractions[fractions.len() / 2..];
    let liminf = top.iter().cloned().fold(f64::INFINITY, f64::min);
    let verdict = if top.iter().all(|&f| f < th.vanishing) {
        DensityVerdict::DensityVanishing
    } else if liminf >= th.positive && top.windows(2).all(|w| w[1] >= w[0] - th.trend_slack) {
        DensityVerdict::DensityPositive
    } else {
        DensityVerdict::Inconclusive
    };
    (liminf, verdict)
}

impl DensityReport {
    /// `n,fraction,residual` rows with a header.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(w);
        let io = |e: csv::Error| Error::Config(format!("csv: {e}"));
        wr.write_record(["n", "fraction", "residual"]).map_err(io)?;
        for i in 0..self.n_values.len() {
            wr.write_record([
                self.n_values[i].to_string(),
                fmt_f64(self.region_fractions[i]),
                fmt_f64(self.potential_residuals[i]),
            ])
            .map_err(io)?;
        }
        wr.flush().map_err(|e| Error::Config(format!("csv: {e}")))?;
        Ok(())
    }
}
