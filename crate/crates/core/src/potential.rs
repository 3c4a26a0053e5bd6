//! Capacity, Green's functions, equilibrium measures and logarithmic
//! potentials. Closed forms where a family has one, Leja-point estimates
//! otherwise.

use std::io::{Read, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sets::{self, convex_hull, Hull, SetSpec};

/// Leja points used for empirical Green models.
pub const LEJA_MODEL_POINTS: usize = 256;

/// Sample density per Leja point.
pub const LEJA_OVERSAMPLE: usize = 16;

/// Greedy Leja sequence over a candidate set. The first point is the first
/// candidate of maximal modulus; ties always go to the earliest index.
/// Returns the points and `log d_k = (1/k) sum_{j<k} log|a_k - a_j|` for
/// `k >= 1` (entry 0 is NaN).
pub fn leja_from_candidates(candidates: &[Complex64], n: usize) -> Result<(Vec<Complex64>, Vec<f64>)> {
    if n > candidates.len() {
        return Err(Error::TooFewSamplePoints {
            requested: n,
            available: candidates.len(),
        });
    }
    if n == 0 {
        return Ok((Vec::new(), Vec::new()));
    }
    let mut first = 0;
    for (i, z) in candidates.iter().enumerate() {
        if z.norm() > candidates[first].norm() {
            first = i;
        }
    }
    let mut chosen = vec![candidates[first]];
    let mut logd = vec![f64::NAN];
    let mut acc: Vec<f64> = candidates.iter().map(|z| (z - candidates[first]).norm().ln()).collect();
    acc[first] = f64::NEG_INFINITY;
    for k in 1..n {
        let mut best = usize::MAX;
        let mut best_val = f64::NEG_INFINITY;
        for (i, &v) in acc.iter().enumerate() {
            if v > best_val {
                best_val = v;
                best = i;
            }
        }
        if best == usize::MAX {
            // Remaining candidates coincide with chosen points.
            return Err(Error::TooFewSamplePoints {
                requested: n,
                available: k,
            });
        }
        let a = candidates[best];
        chosen.push(a);
        logd.push(best_val / k as f64);
        for (i, z) in candidates.iter().enumerate() {
            if acc[i] > f64::NEG_INFINITY {
                acc[i] += (z - a).norm().ln();
            }
        }
        acc[best] = f64::NEG_INFINITY;
    }
    Ok((chosen, logd))
}

fn candidate_sample(spec: &SetSpec, n: usize) -> Result<Vec<Complex64>> {
    let m = (LEJA_OVERSAMPLE * n).max(64);
    Ok(sets::sample_boundary(spec, m)?.points)
}

/// First `n` Leja points of the boundary of `spec`, chosen from a boundary
/// sample of `16 n` points.
pub fn leja_points(spec: &SetSpec, n: usize) -> Result<Vec<Complex64>> {
    let cands = candidate_sample(spec, n)?;
    Ok(leja_from_candidates(&cands, n)?.0)
}

/// A capacity value together with its provenance.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CapacityEstimate {
    pub value: f64,
    /// True when the value comes from Leja products rather than a formula.
    pub estimated: bool,
    /// False when the Leja estimate moved by more than 1% over the last
    /// doubling of `n`.
    pub converged: bool,
}

/// Leja capacity estimate from the `log d_k` sequence.
///
/// `m(n)`, the minimum of `d_k` over `k in [n/2, n)`, approaches the capacity
/// from above with an error close to `c/n`; one Richardson step
/// `m(n)^2 / m(n/2)` removes the leading term. The estimate is flagged as
/// unconverged when it moved by more than 1% against the same estimate at
/// `n/2`.
pub fn leja_capacity_from_logd(logd: &[f64]) -> CapacityEstimate {
    let n = logd.len();
    let window_min = |lo: usize, hi: usize| {
        let lo = lo.max(1).min(n.saturating_sub(1));
        let hi = hi.min(n).max(lo + 1);
        logd[lo..hi].iter().cloned().fold(f64::INFINITY, f64::min)
    };
    let extrapolated = |n: usize| 2.0 * window_min(n / 2, n) - window_min(n / 4, n / 2);
    if n < 16 {
        let v = window_min(n / 2, n).exp();
        return CapacityEstimate {
            value: v,
            estimated: true,
            converged: false,
        };
    }
    let now = extrapolated(n).exp();
    let before = extrapolated(n / 2).exp();
    CapacityEstimate {
        value: now,
        estimated: true,
        converged: ((now - before) / now).abs() <= 0.01,
    }
}

/// Leja capacity estimate with `n` points, regardless of closed forms.
pub fn leja_capacity(spec: &SetSpec, n: usize) -> Result<CapacityEstimate> {
    let cands = candidate_sample(spec, n)?;
    let (_, logd) = leja_from_candidates(&cands, n)?;
    Ok(leja_capacity_from_logd(&logd))
}

/// Logarithmic capacity: closed form where available, Leja estimate
/// otherwise.
pub fn capacity(spec: &SetSpec) -> Result<CapacityEstimate> {
    spec.validate()?;
    if let Some(c) = spec.closed_capacity() {
        return Ok(CapacityEstimate {
            value: c,
            estimated: false,
            converged: true,
        });
    }
    if let SetSpec::LevelSet { base, alpha } = spec {
        let b = capacity(base)?;
        return Ok(CapacityEstimate {
            value: b.value * alpha.exp(),
            ..b
        });
    }
    leja_capacity(spec, LEJA_MODEL_POINTS)
}

#[derive(Clone, Debug)]
pub enum GreenKind {
    ClosedForm(SetSpec),
    LejaEmpirical {
        leja_points: Vec<Complex64>,
        /// `log d_k` for each prefix of the Leja sequence.
        prefix_log_products: Vec<f64>,
    },
    /// Level set of an empirically modelled base: `G_base - alpha`.
    Shifted { base: Box<GreenModel>, alpha: f64 },
}

/// Green's function evaluation with an interior flag for empirical models.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GreenValue {
    pub value: f64,
    /// Set when an empirical model evaluated to a negative potential, i.e.
    /// the point sits inside the modelled set.
    pub interior: bool,
}

/// Capacity plus a Green's-function evaluator for one set.
#[derive(Clone, Debug)]
pub struct GreenModel {
    pub capacity: f64,
    pub capacity_estimated: bool,
    pub capacity_converged: bool,
    pub kind: GreenKind,
    hull: Hull,
}

fn hull_of(spec: &SetSpec) -> Result<Hull> {
    let s = sets::sample_boundary(spec, 1024)?;
    Ok(convex_hull(&s.points))
}

impl GreenModel {
    /// Closed-form model where the family has one; Leja model with
    /// [`LEJA_MODEL_POINTS`] points otherwise.
    pub fn for_spec(spec: &SetSpec) -> Result<Self> {
        Self::with_leja_points(spec, LEJA_MODEL_POINTS)
    }

    pub fn with_leja_points(spec: &SetSpec, n: usize) -> Result<Self> {
        spec.validate()?;
        if spec.closed_green(Complex64::new(0.0, 0.0)).is_some() {
            let cap = spec.closed_capacity().ok_or_else(|| Error::Unsupported(spec.label()))?;
            return Ok(GreenModel {
                capacity: cap,
                capacity_estimated: false,
                capacity_converged: true,
                kind: GreenKind::ClosedForm(spec.clone()),
                hull: hull_of(spec)?,
            });
        }
        if let SetSpec::LevelSet { base, alpha } = spec {
            let b = GreenModel::with_leja_points(base, n)?;
            return Ok(GreenModel {
                capacity: b.capacity * alpha.exp(),
                capacity_estimated: b.capacity_estimated,
                capacity_converged: b.capacity_converged,
                hull: hull_of(spec)?,
                kind: GreenKind::Shifted {
                    base: Box::new(b),
                    alpha: *alpha,
                },
            });
        }
        let sample = sets::sample_boundary(spec, (LEJA_OVERSAMPLE * n).max(64))?;
        let (pts, logd) = leja_from_candidates(&sample.points, n)?;
        let cap = leja_capacity_from_logd(&logd);
        Ok(GreenModel {
            capacity: cap.value,
            capacity_estimated: true,
            capacity_converged: cap.converged,
            kind: GreenKind::LejaEmpirical {
                leja_points: pts,
                prefix_log_products: logd,
            },
            hull: convex_hull(&sample.points),
        })
    }

    /// Convex hull of the outer boundary.
    pub fn hull(&self) -> &Hull {
        &self.hull
    }

    pub fn green_value(&self, z: Complex64) -> GreenValue {
        match &self.kind {
            GreenKind::ClosedForm(spec) => GreenValue {
                value: spec.closed_green(z).unwrap_or(0.0),
                interior: false,
            },
            GreenKind::LejaEmpirical { leja_points, .. } => {
                let n = leja_points.len() as f64;
                let raw = leja_points.iter().map(|a| (z - a).norm().ln()).sum::<f64>() / n - self.capacity.ln();
                if raw.is_nan() || raw < 0.0 {
                    GreenValue {
                        value: 0.0,
                        interior: true,
                    }
                } else {
                    GreenValue {
                        value: raw,
                        interior: false,
                    }
                }
            }
            GreenKind::Shifted { base, alpha } => {
                let g = base.green_value(z);
                let v = g.value - alpha;
                GreenValue {
                    value: v.max(0.0),
                    interior: g.interior || v < 0.0,
                }
            }
        }
    }

    /// `G(z) >= 0`, zero on and inside the set.
    pub fn green(&self, z: Complex64) -> f64 {
        self.green_value(z).value
    }

    /// `log C + G(z)`: the logarithmic potential of the equilibrium measure
    /// at an exterior point.
    pub fn equilibrium_potential(&self, z: Complex64) -> f64 {
        match &self.kind {
            GreenKind::LejaEmpirical { leja_points, .. } => {
                leja_points.iter().map(|a| (z - a).norm().ln()).sum::<f64>() / leja_points.len() as f64
            }
            _ => self.capacity.ln() + self.green(z),
        }
    }
}

/// Green's function of `spec` at `z`.
pub fn green(model: &GreenModel, z: Complex64) -> f64 {
    model.green(z)
}

/// Weighted point cloud with unit total mass.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalMeasure {
    pub atoms: Vec<Complex64>,
    pub masses: Vec<f64>,
    /// Number of underlying objects (e.g. zeros counted with multiplicity),
    /// so masses convert back to counts.
    #[serde(default)]
    pub count: Option<usize>,
}

impl EmpiricalMeasure {
    /// Normalizes `masses` to unit total.
    pub fn new(atoms: Vec<Complex64>, masses: Vec<f64>) -> Result<Self> {
        if atoms.len() != masses.len() || atoms.is_empty() {
            return Err(Error::InvalidSpec("measure needs matching, nonempty atoms and masses".into()));
        }
        if masses.iter().any(|&m| !(m > 0.0) || !m.is_finite()) {
            return Err(Error::InvalidSpec("masses must be positive".into()));
        }
        let total: f64 = masses.iter().sum();
        let masses = masses.into_iter().map(|m| m / total).collect();
        Ok(EmpiricalMeasure {
            atoms,
            masses,
            count: None,
        })
    }

    /// Equal masses `1/n`.
    pub fn uniform(atoms: Vec<Complex64>) -> Result<Self> {
        let n = atoms.len();
        let mut m = Self::new(atoms, vec![1.0; n])?;
        m.count = Some(n);
        Ok(m)
    }

    pub fn total_mass(&self) -> f64 {
        self.masses.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Writes `re,im,mass` rows with a header.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w);
        let io = |e: csv::Error| Error::Config(format!("csv: {e}"));
        wr.write_record(["re", "im", "mass"]).map_err(io)?;
        for (a, m) in self.atoms.iter().zip(&self.masses) {
            wr.write_record([crate::io::fmt_f64(a.re), crate::io::fmt_f64(a.im), crate::io::fmt_f64(*m)])
                .map_err(io)?;
        }
        wr.flush().map_err(|e| Error::Config(format!("csv: {e}")))?;
        Ok(())
    }

    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let mut rd = csv::Reader::from_reader(r);
        let mut atoms = Vec::new();
        let mut masses = Vec::new();
        for rec in rd.records() {
            let rec = rec.map_err(|e| Error::Config(format!("csv: {e}")))?;
            let f = |i: usize| -> Result<f64> {
                rec.get(i)
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| Error::Config(format!("bad measure row {rec:?}")))
            };
            atoms.push(Complex64::new(f(0)?, f(1)?));
            masses.push(f(2)?);
        }
        Self::new(atoms, masses)
    }
}

/// Equilibrium measure approximation with about `n` atoms. Families with an
/// explicit parameterization use the harmonic parameter measure of their
/// boundary (arcsine nodes, uniform circle points, pulled-back uniform
/// measures); the cauliflower uses the backward orbit of a point; everything
/// else the Leja counting measure.
pub fn equilibrium_measure(spec: &SetSpec, n: usize) -> Result<EmpiricalMeasure> {
    spec.validate()?;
    let harmonic_param = match spec {
        SetSpec::Interval { .. }
        | SetSpec::Disk { .. }
        | SetSpec::ConfocalEllipse { .. }
        | SetSpec::Lemniscate { .. }
        | SetSpec::PolynomialPreimage { .. } => true,
        SetSpec::RealIntervalUnion { intervals } => intervals.len() == 1,
        SetSpec::LevelSet { .. } => spec.closed_green(Complex64::new(0.0, 0.0)).is_some(),
        _ => false,
    };
    if harmonic_param {
        let m = n.max(16);
        let s = sets::sample_boundary(spec, m)?;
        return EmpiricalMeasure::new(s.points, s.param_weights);
    }
    if let SetSpec::JuliaCauliflower { .. } = spec {
        let depth = (n.max(2) as f64).log2().ceil() as usize;
        return EmpiricalMeasure::uniform(sets::julia_backward_level(depth));
    }
    EmpiricalMeasure::uniform(leja_points(spec, n)?)
}

/// `sum_j m_j log|z - a_j|`; `-inf` when `z` is an atom.
pub fn log_potential(mu: &EmpiricalMeasure, z: Complex64) -> f64 {
    let mut s = 0.0;
    for (a, m) in mu.atoms.iter().zip(&mu.masses) {
        let d = (z - a).norm();
        if d == 0.0 {
            return f64::NEG_INFINITY;
        }
        s += m * d.ln();
    }
    s
}

/// Max over exterior test points of `|Phi_mu - Phi_{mu_e}|`, where the
/// equilibrium potential is `log C + G`. Test points must lie outside the
/// convex hull of the set.
pub fn balayage_residual(mu: &EmpiricalMeasure, spec: &SetSpec, test_points: &[Complex64]) -> Result<f64> {
    let model = GreenModel::for_spec(spec)?;
    balayage_residual_with(mu, &model, test_points)
}

pub fn balayage_residual_with(mu: &EmpiricalMeasure, model: &GreenModel, test_points: &[Complex64]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for &z in test_points {
        if model.hull().contains(z, 1e-9) {
            return Err(Error::InsideHull { re: z.re, im: z.im });
        }
        worst = worst.max((log_potential(mu, z) - model.equilibrium_potential(z)).abs());
    }
    Ok(worst)
}

/// Critical points of the Green's function in the gaps of a real set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PWReport {
    pub critical_points: Vec<f64>,
    pub green_values: Vec<f64>,
    pub pw_sum: f64,
    /// Connected, simply connected set: no exterior critical points.
    pub csc: bool,
    /// Gaps in which the Green's function vanished identically.
    pub degenerate_gaps: Vec<usize>,
    pub capacity_estimated: bool,
}

/// Golden-section maximization of `f` on `[a, b]` to `tol` in position.
pub fn golden_max(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Polishes a maximum located by golden section: bisection on the sign of a
/// central-difference derivative, which resolves the position well below
/// the square-root-of-epsilon limit of comparing function values.
fn refine_critical_point(g: &impl Fn(f64) -> f64, x0: f64, a: f64, b: f64) -> f64 {
    let h = 1e-6 * (1.0 + x0.abs());
    let d = |t: f64| g(t + h) - g(t - h);
    let delta = 1e-6 * (1.0 + x0.abs());
    let mut lo = (x0 - delta).max(a + 2.0 * h);
    let mut hi = (x0 + delta).min(b - 2.0 * h);
    if !(lo < hi && d(lo) > 0.0 && d(hi) < 0.0) {
        return x0;
    }
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if d(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Parreau–Widom sum: Green's function summed over its critical points, one
/// per bounded gap of a real set. Simply connected sets report zero with the
/// `csc` flag.
pub fn pw_sum(spec: &SetSpec) -> Result<PWReport> {
    spec.validate()?;
    let csc = |estimated| PWReport {
        critical_points: vec![],
        green_values: vec![],
        pw_sum: 0.0,
        csc: true,
        degenerate_gaps: vec![],
        capacity_estimated: estimated,
    };
    let bands = match spec {
        SetSpec::RealIntervalUnion { .. } | SetSpec::PolynomialPreimage { .. } | SetSpec::Interval { .. } => {
            spec.real_intervals().ok_or_else(|| {
                Error::Unsupported("PW sums need a preimage lying on the real line".into())
            })?
        }
        SetSpec::Disk { .. }
        | SetSpec::ConfocalEllipse { .. }
        | SetSpec::Polygon { .. }
        | SetSpec::KochAntenna { .. }
        | SetSpec::DiskPlusSpike { .. }
        | SetSpec::JuliaCauliflower { .. } => return Ok(csc(false)),
        _ => return Err(Error::Unsupported(format!("PW sum for {}", spec.name()))),
    };
    if bands.len() == 1 {
        return Ok(csc(false));
    }
    let model = GreenModel::for_spec(spec)?;
    let mut report = PWReport {
        critical_points: vec![],
        green_values: vec![],
        pw_sum: 0.0,
        csc: false,
        degenerate_gaps: vec![],
        capacity_estimated: model.capacity_estimated,
    };
    for (i, w) in bands.windows(2).enumerate() {
        let (a, b) = (w[0].1, w[1].0);
        let g = |x: f64| model.green(Complex64::new(x, 0.0));
        let x = refine_critical_point(&g, golden_max(&g, a, b, 1e-9 * (1.0 + a.abs().max(b.abs()))), a, b);
        let v = g(x);
        if v <= 0.0 {
            report.degenerate_gaps.push(i);
        }
        report.critical_points.push(x);
        report.green_values.push(v);
    }
    report.pw_sum = report.green_values.iter().sum();
    Ok(report)
}
