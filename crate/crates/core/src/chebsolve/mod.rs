//! Chebyshev polynomials: closed forms, a Lawson solver for complex sets,
//! Remez exchange for real sets, an LP cross-check and an optimality
//! certificate.

mod lawson;
mod lp;
mod remez;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{ComplexPoly, RootConfig};
use crate::potential;
use crate::sets::{self, SetSpec};

pub use lawson::{solve_complex, weighted_monic_lsq};
pub use lp::{lp_oracle, LpOutcome};
pub use remez::solve_real;

/// Degree cap for the iterative solvers.
pub const MAX_SOLVER_DEGREE: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    ClosedForm,
    Lawson,
    Remez,
    LPOracle,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::ClosedForm => "ClosedForm",
            Method::Lawson => "Lawson",
            Method::Remez => "Remez",
            Method::LPOracle => "LPOracle",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SolveStatus {
    /// Closed form; nothing to converge.
    Exact,
    Converged,
    IterationCap,
    RefinementCap,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub status: SolveStatus,
    pub iterations: usize,
    pub refinement_rounds: usize,
    /// Final discretization size.
    pub sample_size: usize,
    /// `(max|r| - rms_w|r|) / max|r|` for the final weights (Lawson), or the
    /// alternation defect (Remez).
    pub residual_spread: f64,
    /// Certified lower bound on the discrete minimax value.
    pub lower_bound: f64,
    pub notes: Vec<String>,
}

impl Diagnostics {
    fn exact(sample_size: usize, t_n: f64) -> Self {
        Diagnostics {
            status: SolveStatus::Exact,
            iterations: 0,
            refinement_rounds: 0,
            sample_size,
            residual_spread: 0.0,
            lower_bound: t_n,
            notes: Vec::new(),
        }
    }
}

/// A monic minimax polynomial with its norm and provenance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChebyshevSolution {
    pub n: usize,
    #[serde(rename = "T")]
    pub poly: ComplexPoly,
    pub t_n: f64,
    pub capacity: f64,
    pub capacity_estimated: bool,
    /// `t_n / capacity^n`.
    pub widom: f64,
    pub extreme_points: Vec<Complex64>,
    pub method: Method,
    pub diagnostics: Diagnostics,
}

impl ChebyshevSolution {
    pub fn is_converged(&self) -> bool {
        matches!(self.diagnostics.status, SolveStatus::Exact | SolveStatus::Converged)
    }
}

fn default_m0() -> usize {
    1024
}
fn default_exponent() -> f64 {
    0.5
}
fn default_max_iters() -> usize {
    4000
}
fn default_rel_tol() -> f64 {
    1e-8
}
fn default_refine_rounds() -> usize {
    sets::MAX_REFINE_ROUNDS
}
fn default_lp_angles() -> usize {
    64
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    #[serde(default = "default_m0")]
    pub m0: usize,
    #[serde(default = "default_exponent")]
    pub lawson_exponent: f64,
    #[serde(default = "default_max_iters")]
    pub max_iters: usize,
    #[serde(default = "default_rel_tol")]
    pub rel_tol: f64,
    #[serde(default = "default_refine_rounds")]
    pub refine_rounds: usize,
    #[serde(default = "default_lp_angles")]
    pub lp_angles: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            m0: default_m0(),
            lawson_exponent: default_exponent(),
            max_iters: default_max_iters(),
            rel_tol: default_rel_tol(),
            refine_rounds: default_refine_rounds(),
            lp_angles: default_lp_angles(),
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.m0 == 0 || self.max_iters == 0 || self.lp_angles < 3 {
            return Err(Error::Config("m0, max_iters must be positive and lp_angles >= 3".into()));
        }
        if !(self.lawson_exponent > 0.0 && self.lawson_exponent <= 1.0) {
            return Err(Error::Config("lawson_exponent must lie in (0, 1]".into()));
        }
        if !(self.rel_tol >= 1e-12 && self.rel_tol < 1.0) {
            return Err(Error::Config("rel_tol must lie in [1e-12, 1)".into()));
        }
        if self.refine_rounds == 0 || self.refine_rounds > sets::MAX_REFINE_ROUNDS {
            return Err(Error::Config(format!(
                "refine_rounds must lie in 1..={}",
                sets::MAX_REFINE_ROUNDS
            )));
        }
        Ok(())
    }
}

/// Monic Chebyshev polynomial of `[-2, 2]`: `x T_k - T_{k-1}` with
/// `T_0 = 2`, `T_1 = x`; the degree-0 member is taken as 1.
pub fn interval_chebyshev(n: usize) -> ComplexPoly {
    if n == 0 {
        return ComplexPoly::one();
    }
    let x = ComplexPoly::x();
    let mut prev = ComplexPoly::from_real(&[2.0]);
    let mut cur = x.clone();
    for _ in 1..n {
        let next = &(&x * &cur) - &prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Extreme points of `poly` on the boundary: polished local maxima with
/// `|T| >= (1 - tol) t`.
fn extreme_points(spec: &SetSpec, poly: &ComplexPoly, n: usize, tol: f64) -> Result<(Vec<Complex64>, f64, usize)> {
    let sample = sets::sample_boundary(spec, (32 * n).max(256))?;
    let maxima = sets::boundary_maxima(&sample, poly, spec, 0.5)?;
    let disc = sample.max_abs(poly);
    let t = maxima.iter().map(|m| m.1).fold(disc, f64::max);
    let pts = maxima
        .into_iter()
        .filter(|m| m.1 >= (1.0 - tol) * t)
        .map(|m| m.0)
        .collect();
    Ok((pts, t, sample.len()))
}

fn finish(
    spec: &SetSpec,
    n: usize,
    poly: ComplexPoly,
    t_n: f64,
    method: Method,
    extreme: Vec<Complex64>,
    diagnostics: Diagnostics,
) -> Result<ChebyshevSolution> {
    let cap = potential::capacity(spec)?;
    let widom = widom_value(t_n, cap.value, n);
    let extreme = dedup_points(extreme);
    Ok(ChebyshevSolution {
        n,
        poly,
        t_n,
        capacity: cap.value,
        capacity_estimated: cap.estimated,
        widom,
        extreme_points: extreme,
        method,
        diagnostics,
    })
}

/// Relative band below `t_n` within which boundary maxima count as extreme
/// points, widened when the solver stopped short of its tolerance.
pub(crate) fn extreme_band(spread: f64) -> f64 {
    (10.0 * spread).clamp(1e-6, 1e-3)
}

/// Removes repeated points (the out-and-back spike visits its points twice).
pub(crate) fn dedup_points(mut pts: Vec<Complex64>) -> Vec<Complex64> {
    let scale = pts.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let mut out: Vec<Complex64> = Vec::with_capacity(pts.len());
    pts.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap().then(a.im.partial_cmp(&b.im).unwrap()));
    for z in pts {
        if !out.iter().any(|w| (w - z).norm() <= 1e-9 * scale) {
            out.push(z);
        }
    }
    out
}

fn widom_value(t_n: f64, capacity: f64, n: usize) -> f64 {
    (t_n.ln() - n as f64 * capacity.ln()).exp()
}

/// Closed-form Chebyshev polynomial where the family provides one.
/// `Ok(None)` means not available for this (family, n) pair. Degree 0 is
/// always available with the convention `T_0 = 1`, `t_0 = 1`.
pub fn closed_form(spec: &SetSpec, n: usize) -> Result<Option<ChebyshevSolution>> {
    spec.validate()?;
    let exact = closed_poly(spec, n)?;
    let Some((poly, t_n)) = exact else { return Ok(None) };
    if n == 0 {
        return Ok(Some(ChebyshevSolution {
            n: 0,
            poly,
            t_n: 1.0,
            capacity: potential::capacity(spec)?.value,
            capacity_estimated: false,
            widom: 1.0,
            extreme_points: Vec::new(),
            method: Method::ClosedForm,
            diagnostics: Diagnostics::exact(0, 1.0),
        }));
    }
    let (extreme, _, m) = extreme_points(spec, &poly, n, 1e-9)?;
    finish(spec, n, poly, t_n, Method::ClosedForm, extreme, Diagnostics::exact(m, t_n)).map(Some)
}

fn closed_poly(spec: &SetSpec, n: usize) -> Result<Option<(ComplexPoly, f64)>> {
    if n == 0 {
        return Ok(Some((ComplexPoly::one(), 1.0)));
    }
    let nf = n as f64;
    Ok(match spec {
        SetSpec::Disk { center, radius } => Some((ComplexPoly::shifted_power(*center, n)?, radius.powi(n as i32))),
        SetSpec::Interval { a, b } => Some(scaled_interval(*a, *b, n, 2.0)),
        SetSpec::RealIntervalUnion { intervals } if intervals.len() == 1 => {
            Some(scaled_interval(intervals[0][0], intervals[0][1], n, 2.0))
        }
        SetSpec::ConfocalEllipse { alpha } => Some((interval_chebyshev(n), 2.0 * (nf * alpha).cosh())),
        SetSpec::Lemniscate { p, alpha } => {
            let d = p.degree().unwrap_or(1);
            if n % d == 0 {
                Some((p.pow(n / d)?, alpha.powi((n / d) as i32)))
            } else {
                None
            }
        }
        SetSpec::PolynomialPreimage { p } => {
            let d = p.degree().unwrap_or(1);
            if n % d == 0 {
                Some((ComplexPoly::compose(&interval_chebyshev(n / d), p)?, 2.0))
            } else {
                None
            }
        }
        SetSpec::LevelSet { base, alpha } => match base.as_ref() {
            SetSpec::PolynomialPreimage { p } => {
                let d = p.degree().unwrap_or(1);
                if n % d == 0 {
                    Some((
                        ComplexPoly::compose(&interval_chebyshev(n / d), p)?,
                        2.0 * (nf * alpha).cosh(),
                    ))
                } else {
                    None
                }
            }
            SetSpec::Interval { a, b } => {
                let (poly, _) = scaled_interval(*a, *b, n, 2.0);
                let rho = 0.25 * (b - a);
                Some((poly, rho.powi(n as i32) * 2.0 * (nf * alpha).cosh()))
            }
            SetSpec::RealIntervalUnion { intervals } if intervals.len() == 1 => {
                let (a, b) = (intervals[0][0], intervals[0][1]);
                let (poly, _) = scaled_interval(a, b, n, 2.0);
                let rho = 0.25 * (b - a);
                Some((poly, rho.powi(n as i32) * 2.0 * (nf * alpha).cosh()))
            }
            SetSpec::Disk { .. } | SetSpec::ConfocalEllipse { .. } | SetSpec::Lemniscate { .. } | SetSpec::LevelSet { .. } => {
                return closed_poly(&sets::level_set(base, *alpha)?, n)
            }
            _ => None,
        },
        _ => None,
    })
}

/// `rho^n T_n((x - c)/rho)` with `rho = (b - a)/4` and norm `factor rho^n`.
fn scaled_interval(a: f64, b: f64, n: usize, factor: f64) -> (ComplexPoly, f64) {
    let c = 0.5 * (a + b);
    let rho = 0.25 * (b - a);
    let t = interval_chebyshev(n).affine_substitute(Complex64::new(1.0 / rho, 0.0), Complex64::new(-c / rho, 0.0));
    let poly = t.scaled(Complex64::new(rho.powi(n as i32), 0.0)).to_monic();
    (poly, factor * rho.powi(n as i32))
}

/// Best available method: closed form, then Remez for real sets, then
/// Lawson.
pub fn solve(spec: &SetSpec, n: usize, cfg: &SolverConfig) -> Result<ChebyshevSolution> {
    if let Some(s) = closed_form(spec, n)? {
        return Ok(s);
    }
    if spec.real_intervals().is_some() {
        return solve_real(spec, n, cfg);
    }
    solve_complex(spec, n, cfg)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CertificateVerdict {
    Certified,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub verdict: CertificateVerdict,
    /// Roots of `P - ||P||` and `P + ||P||` inside the set, with
    /// multiplicity.
    pub count: usize,
    pub needed: usize,
    pub norm: f64,
}

/// Sufficient optimality test: a monic `P` of degree `n` is the Chebyshev
/// polynomial of the set when `P = ±||P||` has `2n` solutions in the set,
/// counting multiplicity. `tol` is the membership slack (Green level for
/// closed-form families, distance relative to the hull diameter
/// otherwise).
pub fn certificate_check(spec: &SetSpec, p: &ComplexPoly, tol: f64) -> Result<Certificate> {
    let n = p
        .degree()
        .filter(|&d| d >= 1)
        .ok_or_else(|| Error::InvalidSpec("certificate needs degree >= 1".into()))?;
    if !p.is_monic() {
        return Err(Error::InvalidSpec("certificate needs a monic polynomial".into()));
    }
    let sample = sets::sample_boundary(spec, (64 * n).max(2048))?;
    let maxima = sets::boundary_maxima(&sample, p, spec, 0.9)?;
    let norm = maxima.iter().map(|m| m.1).fold(sample.max_abs(p), f64::max);
    let hull = sets::convex_hull(&sample.points);
    let slack = if spec.closed_green(Complex64::new(0.0, 0.0)).is_some() {
        tol
    } else {
        tol * hull.diameter().max(1e-300)
    };
    let cfg = RootConfig {
        cluster_radius: tol.clamp(1e-9, 1e-4),
        ..RootConfig::default()
    };
    let mut count = 0;
    for sign in [1.0, -1.0] {
        let q = p - &ComplexPoly::constant(Complex64::new(sign * norm, 0.0));
        for r in q.roots(&cfg)?.roots {
            if spec.contains(r.value, slack) {
                count += r.multiplicity;
            }
        }
    }
    Ok(Certificate {
        verdict: if count >= 2 * n {
            CertificateVerdict::Certified
        } else {
            CertificateVerdict::Inconclusive
        },
        count,
        needed: 2 * n,
        norm,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WidomFactor {
    pub value: f64,
    /// Capacity came from a Leja estimate.
    pub estimated: bool,
}

/// `t_n / C^n` against the capacity of `spec`.
pub fn widom_factor(sol: &ChebyshevSolution, spec: &SetSpec) -> Result<WidomFactor> {
    let cap = potential::capacity(spec)?;
    Ok(WidomFactor {
        value: widom_value(sol.t_n, cap.value, sol.n),
        estimated: cap.estimated,
    })
}
