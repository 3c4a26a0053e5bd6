//! Widom factors, Totik–Widom bound checks, level-set monotonicity and
//! antenna scans.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chebsolve::{self, ChebyshevSolution, SolverConfig};
use crate::error::{Error, Result};
use crate::io::fmt_f64;
use crate::poly::ComplexPoly;
use crate::potential;
use crate::sets::{self, SetSpec};

/// Relative slack below which a bound still passes.
pub const BOUND_TOL: f64 = 1e-9;

/// Column order of every table this module writes.
pub const CSV_HEADER: [&str; 9] = ["set", "n", "alpha", "t_n", "cap_pow", "widom", "bound", "slack", "method"];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WidomRow {
    pub n: usize,
    pub t_n: f64,
    /// `capacity^n`.
    pub cap_pow: f64,
    pub widom: f64,
    pub method: String,
    pub converged: bool,
    pub capacity_estimated: bool,
}

impl WidomRow {
    pub fn from_solution(sol: &ChebyshevSolution) -> Self {
        let cap_pow = sol.capacity.powi(sol.n as i32);
        WidomRow {
            n: sol.n,
            t_n: sol.t_n,
            cap_pow,
            widom: sol.t_n / cap_pow,
            method: sol.method.as_str().to_string(),
            converged: sol.is_converged(),
            capacity_estimated: sol.capacity_estimated,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RowFailure {
    pub n: usize,
    pub alpha: Option<f64>,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WidomScan {
    pub spec: SetSpec,
    pub rows: Vec<WidomRow>,
    pub failures: Vec<RowFailure>,
}

/// Best available solution: closed form, the `t_0 = 1` convention, then the
/// solvers.
pub fn best_solution(spec: &SetSpec, n: usize, cfg: &SolverConfig) -> Result<ChebyshevSolution> {
    if n == 0 {
        return chebsolve::closed_form(spec, 0)?.ok_or_else(|| Error::Unsupported(spec.label()));
    }
    chebsolve::solve(spec, n, cfg)
}

/// Widom factors for each degree; failed rows are recorded and skipped.
pub fn widom_scan(spec: &SetSpec, n_list: &[usize], cfg: &SolverConfig) -> Result<WidomScan> {
    spec.validate()?;
    cfg.validate()?;
    let results: Vec<(usize, Result<ChebyshevSolution>)> =
        n_list.par_iter().map(|&n| (n, best_solution(spec, n, cfg))).collect();
    let mut scan = WidomScan {
        spec: spec.clone(),
        rows: Vec::new(),
        failures: Vec::new(),
    };
    for (n, r) in results {
        match r {
            Ok(sol) => scan.rows.push(WidomRow::from_solution(&sol)),
            Err(e) => scan.failures.push(RowFailure {
                n,
                alpha: None,
                reason: e.to_string(),
            }),
        }
    }
    Ok(scan)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TWBoundReport {
    pub bound_name: String,
    pub set: String,
    pub n: usize,
    pub alpha: Option<f64>,
    /// `t_n`.
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs - lhs`.
    pub slack: f64,
    pub pass: bool,
    /// Equality up to [`BOUND_TOL`].
    pub tight: bool,
    pub cap_pow: f64,
    pub method: String,
    /// Capacity or PW sum came from an estimate.
    pub estimated: bool,
}

impl TWBoundReport {
    fn new(name: &str, set: &SetSpec, alpha: Option<f64>, row: &WidomRow, rhs: f64, estimated: bool) -> Self {
        let slack = rhs - row.t_n;
        TWBoundReport {
            bound_name: name.to_string(),
            set: set.label(),
            n: row.n,
            alpha,
            lhs: row.t_n,
            rhs,
            slack,
            pass: slack >= -BOUND_TOL * rhs,
            tight: slack.abs() <= BOUND_TOL * rhs,
            cap_pow: row.cap_pow,
            method: row.method.clone(),
            estimated: estimated || row.capacity_estimated,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LemniscateBound {
    /// `max_{j < deg P} W_j`, with `W_0 = 1`.
    pub q: f64,
    pub base_rows: Vec<WidomRow>,
    /// `t_m <= Q C^m` rows, then `W_m <= W_{m mod deg}` rows for `m` not a
    /// multiple of the degree.
    pub reports: Vec<TWBoundReport>,
    pub failures: Vec<RowFailure>,
}

/// Totik–Widom check on the lemniscate `{|P| <= alpha}`: sets
/// `Q = max_{j < deg P} W_j` and tests `W_m <= Q` for each `m` in `m_list`.
pub fn lemniscate_bound(p: &ComplexPoly, alpha: f64, m_list: &[usize], cfg: &SolverConfig) -> Result<LemniscateBound> {
    let d = p.degree().unwrap_or(0);
    if d < 2 {
        return Err(Error::InvalidSpec("lemniscate bound needs deg P >= 2".into()));
    }
    let spec = SetSpec::lemniscate(p.clone(), alpha);
    spec.validate()?;
    let base: Vec<Result<ChebyshevSolution>> = (0..d).into_par_iter().map(|j| best_solution(&spec, j, cfg)).collect();
    let mut base_rows = Vec::with_capacity(d);
    for (j, r) in base.into_iter().enumerate() {
        let sol = r.map_err(|e| Error::Exchange(format!("base degree {j} of the lemniscate bound: {e}")))?;
        base_rows.push(WidomRow::from_solution(&sol));
    }
    let q = base_rows.iter().map(|r| r.widom).fold(f64::NEG_INFINITY, f64::max);
    let results: Vec<(usize, Result<ChebyshevSolution>)> =
        m_list.par_iter().map(|&m| (m, best_solution(&spec, m, cfg))).collect();
    let mut reports = Vec::new();
    let mut sub = Vec::new();
    let mut failures = Vec::new();
    for (m, r) in results {
        match r {
            Ok(sol) => {
                let row = WidomRow::from_solution(&sol);
                reports.push(TWBoundReport::new("lemniscate-Q", &spec, None, &row, q * row.cap_pow, false));
                let j = m % d;
                if j != 0 {
                    let wj = base_rows[j].widom;
                    sub.push(TWBoundReport::new("submultiplicative", &spec, None, &row, wj * row.cap_pow, false));
                }
            }
            Err(e) => failures.push(RowFailure {
                n: m,
                alpha: None,
                reason: e.to_string(),
            }),
        }
    }
    reports.extend(sub);
    Ok(LemniscateBound {
        q,
        base_rows,
        reports,
        failures,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonotonicityRow {
    pub alpha: f64,
    pub row: Option<WidomRow>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonotonicityReport {
    pub set: String,
    pub n: usize,
    pub rows: Vec<MonotonicityRow>,
    /// Relative tolerance of the comparison, twice the solver tolerance.
    pub tolerance: f64,
    pub pass: bool,
}

/// `W_n` of the level sets `e^alpha` across increasing `alphas`, checked to
/// be nonincreasing. Pairs involving a failed solve are not compared.
pub fn levelset_monotonicity(spec: &SetSpec, alphas: &[f64], n: usize, cfg: &SolverConfig) -> Result<MonotonicityReport> {
    spec.validate()?;
    cfg.validate()?;
    if alphas.windows(2).any(|w| !(w[1] > w[0])) || alphas.iter().any(|&a| !(a > 0.0)) {
        return Err(Error::Config("alphas must be positive and increasing".into()));
    }
    let rows: Vec<MonotonicityRow> = alphas
        .par_iter()
        .map(|&alpha| {
            let r = sets::level_set(spec, alpha).and_then(|s| best_solution(&s, n, cfg));
            match r {
                Ok(sol) => MonotonicityRow {
                    alpha,
                    row: Some(WidomRow::from_solution(&sol)),
                    error: None,
                },
                Err(e) => MonotonicityRow {
                    alpha,
                    row: None,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect();
    let tolerance = 2.0 * cfg.rel_tol;
    let pass = rows.windows(2).all(|w| match (&w[0].row, &w[1].row) {
        (Some(a), Some(b)) => b.widom <= a.widom * (1.0 + tolerance),
        _ => true,
    });
    Ok(MonotonicityReport {
        set: spec.label(),
        n,
        rows,
        tolerance,
        pass,
    })
}

pub const LEVELSET_BOUND: &str = "levelset-1+e^-n.alpha";
pub const LEVELSET_BOUND_SHARP: &str = "levelset-1+e^-2n.alpha";
pub const REAL_BOUND: &str = "real-2e^PW";

/// Checks `t_n(e^alpha) <= (1 + e^{-n alpha}) e^{PW} C(e^alpha)^n` on level
/// sets of a real set, and records the `(1 + e^{-2 n alpha})` variant next
/// to it.
pub fn levelset_real_bound(
    spec: &SetSpec,
    alphas: &[f64],
    n_list: &[usize],
    cfg: &SolverConfig,
) -> Result<(Vec<TWBoundReport>, Vec<RowFailure>)> {
    if spec.real_intervals().is_none() {
        return Err(Error::Unsupported(format!("{} is not a real set", spec.label())));
    }
    let pw = potential::pw_sum(spec)?;
    let cells: Vec<(f64, usize)> = alphas.iter().flat_map(|&a| n_list.iter().map(move |&n| (a, n))).collect();
    let results: Vec<(f64, usize, Result<(SetSpec, ChebyshevSolution)>)> = cells
        .par_iter()
        .map(|&(alpha, n)| {
            let r = sets::level_set(spec, alpha).and_then(|s| best_solution(&s, n, cfg).map(|sol| (s, sol)));
            (alpha, n, r)
        })
        .collect();
    let mut reports = Vec::new();
    let mut failures = Vec::new();
    for (alpha, n, r) in results {
        match r {
            Ok((set, sol)) => {
                let row = WidomRow::from_solution(&sol);
                let base = pw.pw_sum.exp() * row.cap_pow;
                let na = n as f64 * alpha;
                let est = pw.capacity_estimated;
                reports.push(TWBoundReport::new(LEVELSET_BOUND, &set, Some(alpha), &row, (1.0 + (-na).exp()) * base, est));
                reports.push(TWBoundReport::new(
                    LEVELSET_BOUND_SHARP,
                    &set,
                    Some(alpha),
                    &row,
                    (1.0 + (-2.0 * na).exp()) * base,
                    est,
                ));
            }
            Err(e) => failures.push(RowFailure {
                n,
                alpha: Some(alpha),
                reason: e.to_string(),
            }),
        }
    }
    Ok((reports, failures))
}

/// Checks `t_n <= 2 e^{PW} C^n` on a real set.
pub fn tw_real_bound(spec: &SetSpec, n_list: &[usize], cfg: &SolverConfig) -> Result<(Vec<TWBoundReport>, Vec<RowFailure>)> {
    if spec.real_intervals().is_none() {
        return Err(Error::Unsupported(format!("{} is not a real set", spec.label())));
    }
    let pw = potential::pw_sum(spec)?;
    let scan = widom_scan(spec, n_list, cfg)?;
    let reports = scan
        .rows
        .iter()
        .map(|row| {
            let rhs = 2.0 * pw.pw_sum.exp() * row.cap_pow;
            TWBoundReport::new(REAL_BOUND, spec, None, row, rhs, pw.capacity_estimated)
        })
        .collect();
    Ok((reports, scan.failures))
}

/// How the antenna parameters `a_j` are chosen.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule")]
pub enum ScheduleRule {
    /// `a_j = 1`: the Koch snowflake.
    Snowflake,
    /// `a_j = ratio^j`.
    Geometric { ratio: f64 },
    Explicit { a: Vec<f64> },
}

impl ScheduleRule {
    /// The first `len` parameters.
    pub fn schedule(&self, len: usize) -> Result<Vec<f64>> {
        match self {
            ScheduleRule::Snowflake => Ok(vec![1.0; len]),
            ScheduleRule::Geometric { ratio } => Ok((1..=len).map(|j| ratio.powi(j as i32)).collect()),
            ScheduleRule::Explicit { a } => {
                if a.len() < len {
                    return Err(Error::Config(format!("schedule has {} entries, need {len}", a.len())));
                }
                Ok(a[..len].to_vec())
            }
        }
    }
}

/// One Widom scan per antenna depth. Cells that fail are recorded in their
/// scan; a depth whose antenna cannot be built is returned as an error row.
pub fn antenna_scan(
    rule: &ScheduleRule,
    depths: &[usize],
    beta: f64,
    n_list: &[usize],
    cfg: &SolverConfig,
) -> Result<Vec<WidomScan>> {
    let mut out = Vec::with_capacity(depths.len());
    for &depth in depths {
        let spec = SetSpec::KochAntenna {
            a_schedule: rule.schedule(depth.saturating_sub(1))?,
            depth,
            beta,
        };
        out.push(widom_scan(&spec, n_list, cfg)?);
    }
    Ok(out)
}

/// Writes the fixed-column table. `rows` yields
/// `(set, n, alpha, t_n, cap_pow, widom, bound, slack, method)`.
pub fn write_table<W: Write>(w: W, rows: &[[String; 9]]) -> Result<()> {
    let mut wr = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w);
    let io = |e: csv::Error| Error::Config(format!("csv: {e}"));
    wr.write_record(CSV_HEADER).map_err(io)?;
    for r in rows {
        wr.write_record(r).map_err(io)?;
    }
    wr.flush().map_err(|e| Error::Config(format!("csv: {e}")))?;
    Ok(())
}

fn opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

impl WidomRow {
    pub fn record(&self, set: &str, alpha: Option<f64>) -> [String; 9] {
        [
            set.to_string(),
            self.n.to_string(),
            opt(alpha),
            fmt_f64(self.t_n),
            fmt_f64(self.cap_pow),
            fmt_f64(self.widom),
            String::new(),
            String::new(),
            self.method.clone(),
        ]
    }
}

impl TWBoundReport {
    pub fn record(&self) -> [String; 9] {
        [
            self.set.clone(),
            self.n.to_string(),
            opt(self.alpha),
            fmt_f64(self.lhs),
            fmt_f64(self.cap_pow),
            fmt_f64(self.lhs / self.cap_pow),
            fmt_f64(self.rhs),
            fmt_f64(self.slack),
            self.method.clone(),
        ]
    }
}

impl WidomScan {
    pub fn records(&self) -> Vec<[String; 9]> {
        let label = self.spec.label();
        self.rows.iter().map(|r| r.record(&label, None)).collect()
    }
}
