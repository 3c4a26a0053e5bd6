//! Registered experiments. Each one turns an [`ExperimentConfig`] into
//! named checks plus in-memory artifacts; writing files is left to the
//! caller.

use std::path::PathBuf;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chebsolve::{self, certificate_check, closed_form, solve_complex, CertificateVerdict, SolverConfig};
use crate::error::{Error, Result};
use crate::io::fmt_f64;
use crate::poly::ComplexPoly;
use crate::potential;
use crate::sets::{self, SetSpec};
use crate::widomlab::{self, ScheduleRule, LEVELSET_BOUND};
use crate::zerolab::{self, DensityConfig, DensityReport, RegionSpec};

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

/// Experiment-specific knobs; every field has a per-experiment default.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ExperimentParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alphas: Option<Vec<f64>>,
    /// Test degrees beyond the base range of the lemniscate bound.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub test_degrees: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depths: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schedule: Option<ScheduleRule>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    /// Distance from the set defining the exterior zero count.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub margin: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: String,
    /// Overrides the experiment's default set where it has one.
    #[serde(default)]
    pub set: Option<SetSpec>,
    #[serde(default)]
    pub degrees: Vec<usize>,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default)]
    pub regions: Vec<RegionSpec>,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub params: ExperimentParams,
}

impl ExperimentConfig {
    pub fn new(experiment: &str) -> Self {
        ExperimentConfig {
            experiment: experiment.to_string(),
            set: None,
            degrees: Vec::new(),
            solver: SolverConfig::default(),
            regions: Vec::new(),
            output_dir: default_output_dir(),
            seed: 0,
            params: ExperimentParams::default(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| Error::Config(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        find(&self.experiment)?;
        self.solver.validate()?;
        if let Some(s) = &self.set {
            s.validate().map_err(|e| Error::Config(e.to_string()))?;
        }
        for r in &self.regions {
            r.validate().map_err(|e| Error::Config(e.to_string()))?;
        }
        Ok(())
    }

    fn degrees_or(&self, default: impl IntoIterator<Item = usize>) -> Vec<usize> {
        if self.degrees.is_empty() {
            default.into_iter().collect()
        } else {
            self.degrees.clone()
        }
    }

    fn set_or(&self, default: SetSpec) -> SetSpec {
        self.set.clone().unwrap_or(default)
    }

    fn alphas_or(&self, default: &[f64]) -> Vec<f64> {
        self.params.alphas.clone().unwrap_or_else(|| default.to_vec())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

/// One output file, held in memory.
#[derive(Clone, Debug, PartialEq)]
pub struct Artifact {
    pub name: String,
    pub bytes: Vec<u8>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Outcome {
    pub checks: Vec<Check>,
    pub artifacts: Vec<Artifact>,
    /// Per-cell solver status, e.g. `("n=8", "Converged")`.
    pub cells: Vec<(String, String)>,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    fn check(&mut self, name: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            pass,
            detail: detail.into(),
        });
    }

    fn artifact(&mut self, name: impl Into<String>, bytes: Vec<u8>) {
        self.artifacts.push(Artifact {
            name: name.into(),
            bytes,
        });
    }

    fn cell(&mut self, label: impl Into<String>, status: impl Into<String>) {
        self.cells.push((label.into(), status.into()));
    }
}

pub struct Experiment {
    pub name: &'static str,
    pub description: &'static str,
    run: fn(&ExperimentConfig) -> Result<Outcome>,
}

const REGISTRY: &[Experiment] = &[
    Experiment {
        name: "antenna-scan",
        description: "Widom factors of Koch antennas across truncation depths (trend table, no assertion)",
        run: antenna_scan,
    },
    Experiment {
        name: "bernoulli-zeros",
        description: "Zero clouds of the Bernoulli lemniscate; even degrees put mass 1/2 at each of +1 and -1",
        run: bernoulli_zeros,
    },
    Experiment {
        name: "disk-spike-density",
        description: "Zero fractions near the spike of a disk with an attached segment (trend table)",
        run: disk_spike_density,
    },
    Experiment {
        name: "fixture-always-fails",
        description: "Asserts a false Widom bound on [-2,2]; exercises the failing exit status",
        run: fixture_always_fails,
    },
    Experiment {
        name: "golden-faber",
        description: "Confocal ellipses: closed form 2cosh(n alpha) against the Lawson solver",
        run: golden_faber,
    },
    Experiment {
        name: "golden-lemniscate",
        description: "Bernoulli lemniscate: unit Widom factors and the uniform bound by the low degrees",
        run: golden_lemniscate,
    },
    Experiment {
        name: "golden-periodn-cosh",
        description: "Level sets of P^{-1}([-2,2]) for P = z^2 - 3: t_n = 2cosh(n alpha) with a certificate",
        run: golden_periodn_cosh,
    },
    Experiment {
        name: "monotonicity-thm15",
        description: "Widom factors of level sets are nonincreasing in alpha (interval and period-2 set)",
        run: monotonicity,
    },
    Experiment {
        name: "square-corners",
        description: "Zero fractions near a corner of the square (trend table)",
        run: square_corners,
    },
    Experiment {
        name: "triangle-skeleton",
        description: "Zero clouds of the equilateral triangle and their distance to its skeleton (raw evidence)",
        run: triangle_skeleton,
    },
    Experiment {
        name: "twbound-thm16",
        description: "Totik-Widom bounds 2e^PW C^n and (1+e^{-n alpha})e^PW C^n on the period-2 set",
        run: twbound,
    },
];

/// Registered experiments in alphabetical order.
pub fn registry() -> &'static [Experiment] {
    REGISTRY
}

pub fn names() -> Vec<&'static str> {
    REGISTRY.iter().map(|e| e.name).collect()
}

pub fn find(name: &str) -> Result<&'static Experiment> {
    REGISTRY.iter().find(|e| e.name == name).ok_or_else(|| {
        Error::Config(format!(
            "unknown experiment {name:?}; registered: {}",
            names().join(", ")
        ))
    })
}

pub fn run(cfg: &ExperimentConfig) -> Result<Outcome> {
    let exp = find(&cfg.experiment)?;
    cfg.solver.validate()?;
    (exp.run)(cfg)
}

fn csv_bytes(header: &[&str], rows: &[Vec<String>]) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    {
        let mut wr = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(&mut out);
        let io = |e: csv::Error| Error::Config(format!("csv: {e}"));
        wr.write_record(header).map_err(io)?;
        for r in rows {
            wr.write_record(r).map_err(io)?;
        }
        wr.flush().map_err(|e| Error::Config(format!("csv: {e}")))?;
    }
    Ok(out)
}

fn table_bytes(rows: &[[String; 9]]) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    widomlab::write_table(&mut out, rows)?;
    Ok(out)
}

fn json_bytes<T: Serialize>(v: &T) -> Result<Vec<u8>> {
    let mut out = serde_json::to_vec_pretty(v).map_err(|e| Error::Config(format!("json: {e}")))?;
    out.push(b'\n');
    Ok(out)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn period_two() -> SetSpec {
    SetSpec::preimage(ComplexPoly::from_real(&[-3.0, 0.0, 1.0]))
}

fn golden_faber(cfg: &ExperimentConfig) -> Result<Outcome> {
    let alphas = cfg.alphas_or(&[0.1, 0.5]);
    let degrees = cfg.degrees_or(1..=20);
    let cells: Vec<(f64, usize)> = alphas.iter().flat_map(|&a| degrees.iter().map(move |&n| (a, n))).collect();
    let results: Vec<_> = cells
        .par_iter()
        .map(|&(alpha, n)| {
            let spec = SetSpec::ellipse(alpha);
            let cf = closed_form(&spec, n).and_then(|c| c.ok_or_else(|| Error::Unsupported(spec.label())));
            let sc = solve_complex(&spec, n, &cfg.solver);
            (alpha, n, cf, sc)
        })
        .collect();
    let mut out = Outcome::default();
    let mut rows = Vec::new();
    for (alpha, n, cf, sc) in results {
        let label = format!("alpha={alpha} n={n}");
        let (cf, sc) = match (cf, sc) {
            (Ok(cf), Ok(sc)) => (cf, sc),
            (cf, sc) => {
                let e = cf.err().or(sc.err()).map(|e| e.to_string()).unwrap_or_default();
                out.check(label.clone(), false, e.clone());
                out.cell(label, e);
                continue;
            }
        };
        let na = n as f64 * alpha;
        let exact = na.exp() + (-na).exp();
        let widom_exact = 1.0 + (-2.0 * na).exp();
        let e_cf = rel(cf.t_n, exact);
        let e_sc = rel(sc.t_n, cf.t_n);
        let e_w = (sc.widom - widom_exact).abs() / widom_exact;
        out.check(
            label.clone(),
            e_cf <= 1e-12 && e_sc <= 1e-4 && e_w <= 1e-4,
            format!("closed {e_cf:.2e}, solver {e_sc:.2e}, widom {e_w:.2e}"),
        );
        out.cell(label, format!("{:?}", sc.diagnostics.status));
        rows.push(vec![
            fmt_f64(alpha),
            n.to_string(),
            fmt_f64(cf.t_n),
            fmt_f64(sc.t_n),
            fmt_f64(e_sc),
            fmt_f64(cf.widom),
            fmt_f64(sc.widom),
            format!("{:?}", sc.diagnostics.status),
        ]);
    }
    out.artifact(
        "faber.csv",
        csv_bytes(
            &["alpha", "n", "t_closed", "t_solver", "rel_err", "widom_closed", "widom_solver", "status"],
            &rows,
        )?,
    );
    Ok(out)
}

fn golden_lemniscate(cfg: &ExperimentConfig) -> Result<Outcome> {
    let p = ComplexPoly::from_real(&[-1.0, 0.0, 1.0]);
    let spec = SetSpec::lemniscate(p.clone(), 1.0);
    let mut out = Outcome::default();
    let degrees = cfg.degrees_or([2, 4, 6]);
    let scan = widomlab::widom_scan(&spec, &degrees, &cfg.solver)?;
    for r in &scan.rows {
        let exact = r.method == "ClosedForm" && r.widom == 1.0;
        out.check(format!("widom n={}", r.n), exact, format!("{} via {}", r.widom, r.method));
    }
    for f in &scan.failures {
        out.check(format!("widom n={}", f.n), false, f.reason.clone());
    }
    let sol = solve_complex(&spec, 2, &cfg.solver)?;
    let diff = sol
        .poly
        .coeffs()
        .iter()
        .zip(p.coeffs())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    out.check("solver recovers z^2-1", diff <= 1e-4, format!("max coefficient error {diff:.2e}"));
    let tests = cfg.params.test_degrees.clone().unwrap_or_else(|| (2..=8).collect());
    let bound = widomlab::lemniscate_bound(&p, 1.0, &tests, &cfg.solver)?;
    for r in &bound.reports {
        out.check(
            format!("{} m={}", r.bound_name, r.n),
            r.pass,
            format!("lhs {:.10e} rhs {:.10e}", r.lhs, r.rhs),
        );
        out.cell(format!("m={}", r.n), r.method.clone());
    }
    for f in &bound.failures {
        out.check(format!("bound m={}", f.n), false, f.reason.clone());
    }
    let label = spec.label();
    let mut rows = scan.records();
    rows.extend(bound.base_rows.iter().map(|r| r.record(&label, None)));
    out.artifact("widom.csv", table_bytes(&rows)?);
    let rows: Vec<[String; 9]> = bound.reports.iter().map(|r| r.record()).collect();
    out.artifact("bound.csv", table_bytes(&rows)?);
    Ok(out)
}

fn golden_periodn_cosh(cfg: &ExperimentConfig) -> Result<Outcome> {
    let base = cfg.set_or(period_two());
    let d = base.map_degree().unwrap_or(1);
    let alphas = cfg.alphas_or(&[0.1, 0.3]);
    let degrees = cfg.degrees_or([d, 2 * d]);
    let cells: Vec<(f64, usize)> = alphas.iter().flat_map(|&a| degrees.iter().map(move |&n| (a, n))).collect();
    let results: Vec<_> = cells
        .par_iter()
        .map(|&(alpha, n)| -> Result<_> {
            let set = sets::level_set(&base, alpha)?;
            let cf = closed_form(&set, n)?.ok_or_else(|| Error::Unsupported(format!("{} at n={n}", set.label())))?;
            let sc = solve_complex(&set, n, &cfg.solver)?;
            let cert = certificate_check(&set, &cf.poly, 1e-6)?;
            Ok((alpha, n, cf, sc, cert))
        })
        .collect();
    let mut out = Outcome::default();
    let mut rows = Vec::new();
    for (r, &(alpha, n)) in results.into_iter().zip(&cells) {
        let label = format!("alpha={alpha} n={n}");
        let (_, _, cf, sc, cert) = match r {
            Ok(v) => v,
            Err(e) => {
                out.check(label, false, e.to_string());
                continue;
            }
        };
        let exact = 2.0 * (n as f64 * alpha).cosh();
        let e_cf = rel(cf.t_n, exact);
        let e_sc = rel(sc.t_n, exact);
        let certified = cert.verdict == CertificateVerdict::Certified;
        out.check(
            label.clone(),
            e_cf <= 1e-12 && e_sc <= 1e-4 && certified,
            format!("closed {e_cf:.2e}, solver {e_sc:.2e}, certificate {}/{}", cert.count, cert.needed),
        );
        out.cell(label, format!("{:?}", sc.diagnostics.status));
        rows.push(vec![
            fmt_f64(alpha),
            n.to_string(),
            fmt_f64(exact),
            fmt_f64(cf.t_n),
            fmt_f64(sc.t_n),
            fmt_f64(e_sc),
            format!("{:?}", cert.verdict),
        ]);
    }
    out.artifact(
        "cosh.csv",
        csv_bytes(&["alpha", "n", "t_exact", "t_closed", "t_solver", "rel_err", "certificate"], &rows)?,
    );
    Ok(out)
}

fn monotonicity(cfg: &ExperimentConfig) -> Result<Outcome> {
    let families = match &cfg.set {
        Some(s) => vec![s.clone()],
        None => vec![SetSpec::interval(-2.0, 2.0), period_two()],
    };
    let alphas = cfg.alphas_or(&[0.1, 0.2, 0.3, 0.4, 0.5]);
    let degrees = cfg.degrees_or([3, 4]);
    let mut out = Outcome::default();
    let mut rows = Vec::new();
    for spec in &families {
        for &n in &degrees {
            let rep = widomlab::levelset_monotonicity(spec, &alphas, n, &cfg.solver)?;
            let ws: Vec<String> = rep
                .rows
                .iter()
                .map(|r| r.row.as_ref().map_or("failed".into(), |w| format!("{:.12}", w.widom)))
                .collect();
            out.check(format!("{} n={n}", rep.set), rep.pass, ws.join(" >= "));
            for r in &rep.rows {
                match (&r.row, &r.error) {
                    (Some(w), _) => {
                        out.cell(format!("{} n={n} alpha={}", rep.set, r.alpha), w.method.clone());
                        rows.push(w.record(&rep.set, Some(r.alpha)));
                    }
                    (None, e) => out.cell(
                        format!("{} n={n} alpha={}", rep.set, r.alpha),
                        e.clone().unwrap_or_default(),
                    ),
                }
            }
        }
    }
    out.artifact("monotonicity.csv", table_bytes(&rows)?);
    Ok(out)
}

fn twbound(cfg: &ExperimentConfig) -> Result<Outcome> {
    let spec = cfg.set_or(period_two());
    let mut out = Outcome::default();
    let pw = potential::pw_sum(&spec)?;
    if spec == period_two() {
        let oracle = 0.5 * ((3.0 + 5f64.sqrt()) / 2.0).ln();
        let err = (pw.pw_sum - oracle).abs();
        out.check("pw sum", err <= 1e-8, format!("{:.12} (error {err:.2e})", pw.pw_sum));
    }
    let degrees = cfg.degrees_or(1..=8);
    let (real, fails) = widomlab::tw_real_bound(&spec, &degrees, &cfg.solver)?;
    let alphas = cfg.alphas_or(&[0.1, 0.3, 0.5]);
    let (level, lfails) = widomlab::levelset_real_bound(&spec, &alphas, &degrees, &cfg.solver)?;
    for r in real.iter().chain(level.iter().filter(|r| r.bound_name == LEVELSET_BOUND)) {
        let label = match r.alpha {
            Some(a) => format!("{} alpha={a} n={}", r.bound_name, r.n),
            None => format!("{} n={}", r.bound_name, r.n),
        };
        out.check(label.clone(), r.pass, format!("slack {:.6e}", r.slack));
        out.cell(label, r.method.clone());
    }
    for f in fails.iter().chain(&lfails) {
        out.check(format!("n={} alpha={:?}", f.n, f.alpha), false, f.reason.clone());
    }
    let rows: Vec<[String; 9]> = real.iter().map(|r| r.record()).collect();
    out.artifact("twbound_real.csv", table_bytes(&rows)?);
    for name in [widomlab::LEVELSET_BOUND, widomlab::LEVELSET_BOUND_SHARP] {
        let rows: Vec<[String; 9]> = level.iter().filter(|r| r.bound_name == name).map(|r| r.record()).collect();
        let file = if name == LEVELSET_BOUND {
            "twbound_levelset.csv"
        } else {
            "twbound_levelset_sharp.csv"
        };
        out.artifact(file, table_bytes(&rows)?);
    }
    out.artifact("pw.json", json_bytes(&pw)?);
    Ok(out)
}

fn zero_cloud(out: &mut Outcome, prefix: &str, n: usize, mu: &potential::EmpiricalMeasure) -> Result<()> {
    let mut bytes = Vec::new();
    mu.write_csv(&mut bytes)?;
    out.artifact(format!("{prefix}_n{n:02}.csv"), bytes);
    Ok(())
}

fn bernoulli_zeros(cfg: &ExperimentConfig) -> Result<Outcome> {
    let spec = SetSpec::bernoulli();
    let degrees = cfg.degrees_or(1..=8);
    let plus = RegionSpec::disk(Complex64::new(1.0, 0.0), 0.1).resolve(None)?;
    let minus = RegionSpec::disk(Complex64::new(-1.0, 0.0), 0.1).resolve(None)?;
    let sols: Vec<_> = degrees
        .par_iter()
        .map(|&n| (n, chebsolve::solve(&spec, n, &cfg.solver)))
        .collect();
    let mut out = Outcome::default();
    let mut rows = Vec::new();
    for (n, sol) in sols {
        let sol = match sol {
            Ok(s) => s,
            Err(e) => {
                out.cell(format!("n={n}"), e.to_string());
                continue;
            }
        };
        let mu = zerolab::zero_measure(&sol)?;
        let (mp, mm) = (zerolab::count_in_region(&mu, &plus), zerolab::count_in_region(&mu, &minus));
        let fejer = zerolab::fejer_check(&mu, &spec)?;
        if n % 2 == 0 {
            out.check(
                format!("half masses at +-1, n={n}"),
                mp == 0.5 && mm == 0.5 && mu.len() == 2,
                format!("{mp} at +1, {mm} at -1, {} atoms", mu.len()),
            );
        }
        if sol.is_converged() {
            out.check(format!("hull confinement n={n}"), fejer.pass, format!("{:.2e}", fejer.max_violation));
        }
        out.cell(format!("n={n}"), format!("{:?}", sol.diagnostics.status));
        rows.push(vec![
            n.to_string(),
            fmt_f64(mp),
            fmt_f64(mm),
            mu.len().to_string(),
            fmt_f64(fejer.max_violation),
            sol.method.as_str().to_string(),
        ]);
        zero_cloud(&mut out, "zeros", n, &mu)?;
    }
    out.artifact(
        "bernoulli_zeros.csv",
        csv_bytes(&["n", "mass_plus1", "mass_minus1", "atoms", "hull_violation", "method"], &rows)?,
    );
    Ok(out)
}

/// Density experiment per region, plus exterior counts and zero clouds.
/// Assertion-free: the tables are evidence, not verdicts.
fn density_common(cfg: &ExperimentConfig, spec: &SetSpec, regions: Vec<RegionSpec>, degrees: Vec<usize>) -> Result<Outcome> {
    let dcfg = DensityConfig {
        solver: cfg.solver.clone(),
        ..DensityConfig::default()
    };
    let mut out = Outcome::default();
    let mut summaries: Vec<DensityReport> = Vec::new();
    for (i, region) in regions.iter().enumerate() {
        let rep = zerolab::density_experiment(spec, region, &degrees, &dcfg)?;
        let mut bytes = Vec::new();
        rep.write_csv(&mut bytes)?;
        out.artifact(format!("density_region{i}.csv"), bytes);
        if i == 0 {
            let margin = cfg.params.margin.unwrap_or(0.1);
            let mut rows = Vec::new();
            for (k, mu) in rep.measures.iter().enumerate() {
                let n = rep.n_values[k];
                let count = zerolab::exterior_count(mu, spec, margin)?;
                rows.push(vec![n.to_string(), count.to_string(), rep.converged[k].to_string()]);
                out.cell(format!("n={n}"), if rep.converged[k] { "Converged" } else { "Unconverged" });
                zero_cloud(&mut out, "zeros", n, mu)?;
            }
            out.artifact("exterior.csv", csv_bytes(&["n", "exterior_count", "converged"], &rows)?);
            for m in &rep.missing {
                out.cell(format!("n={}", m.n), m.reason.clone());
            }
        }
        summaries.push(rep);
    }
    out.artifact("density_summary.json", json_bytes(&summaries)?);
    Ok(out)
}

fn disk_spike_density(cfg: &ExperimentConfig) -> Result<Outcome> {
    let spec = cfg.set_or(SetSpec::DiskPlusSpike {
        radius: 1.0,
        spike_end: 2.0,
    });
    let regions = if cfg.regions.is_empty() {
        vec![RegionSpec::disk(Complex64::new(1.5, 0.0), 0.2)]
    } else {
        cfg.regions.clone()
    };
    density_common(cfg, &spec, regions, cfg.degrees_or([4, 6, 8, 10, 12, 14, 16]))
}

fn square_corners(cfg: &ExperimentConfig) -> Result<Outcome> {
    let spec = cfg.set_or(SetSpec::square(1.0));
    let regions = if cfg.regions.is_empty() {
        vec![RegionSpec::disk(Complex64::new(1.0, 1.0), 0.2)]
    } else {
        cfg.regions.clone()
    };
    density_common(cfg, &spec, regions, cfg.degrees_or([4, 6, 8, 10, 12, 14, 16]))
}

fn segment_distance(z: Complex64, a: Complex64, b: Complex64) -> f64 {
    let ab = b - a;
    let t = (((z - a) * ab.conj()).re / ab.norm_sqr()).clamp(0.0, 1.0);
    (z - (a + ab * t)).norm()
}

fn triangle_skeleton(cfg: &ExperimentConfig) -> Result<Outcome> {
    let spec = cfg.set_or(SetSpec::triangle());
    let vertices = match &spec {
        SetSpec::Polygon { vertices } => vertices.clone(),
        _ => return Err(Error::Config("triangle-skeleton needs a polygon".into())),
    };
    let center = vertices.iter().sum::<Complex64>() / vertices.len() as f64;
    let degrees = cfg.degrees_or(2..=14);
    let scan = widomlab::widom_scan(&spec, &degrees, &cfg.solver)?;
    let sols: Vec<_> = degrees
        .par_iter()
        .map(|&n| (n, chebsolve::solve(&spec, n, &cfg.solver)))
        .collect();
    let mut out = Outcome::default();
    let mut rows = Vec::new();
    for (n, sol) in sols {
        let sol = match sol {
            Ok(s) => s,
            Err(e) => {
                out.cell(format!("n={n}"), e.to_string());
                continue;
            }
        };
        let mu = zerolab::zero_measure(&sol)?;
        // Distance of each zero to the union of center-to-vertex segments.
        let dist: Vec<f64> = mu
            .atoms
            .iter()
            .map(|&z| {
                vertices
                    .iter()
                    .map(|&v| segment_distance(z, center, v))
                    .fold(f64::INFINITY, f64::min)
            })
            .collect();
        let max_d = dist.iter().cloned().fold(0.0, f64::max);
        let near: f64 = dist
            .iter()
            .zip(&mu.masses)
            .filter(|(d, _)| **d <= 0.05)
            .fold(0.0, |acc, (_, m)| acc + m);
        out.cell(format!("n={n}"), format!("{:?}", sol.diagnostics.status));
        rows.push(vec![n.to_string(), fmt_f64(max_d), fmt_f64(near)]);
        zero_cloud(&mut out, "zeros", n, &mu)?;
    }
    out.artifact(
        "skeleton.csv",
        csv_bytes(&["n", "max_skeleton_distance", "mass_within_0.05"], &rows)?,
    );
    out.artifact("widom.csv", table_bytes(&scan.records())?);
    Ok(out)
}

fn antenna_scan(cfg: &ExperimentConfig) -> Result<Outcome> {
    let rule = cfg.params.schedule.clone().unwrap_or(ScheduleRule::Snowflake);
    let depths = cfg.params.depths.clone().unwrap_or_else(|| vec![1, 2, 3]);
    let beta = cfg.params.beta.unwrap_or(sets::DEFAULT_KOCH_BETA);
    let degrees = cfg.degrees_or([2, 4, 6, 8]);
    let scans = widomlab::antenna_scan(&rule, &depths, beta, &degrees, &cfg.solver)?;
    let mut out = Outcome::default();
    let mut rows = Vec::new();
    for scan in &scans {
        let label = scan.spec.label();
        for r in &scan.rows {
            out.cell(format!("{label} n={}", r.n), if r.converged { "Converged" } else { "Unconverged" });
        }
        for f in &scan.failures {
            out.cell(format!("{label} n={}", f.n), f.reason.clone());
        }
        rows.extend(scan.records());
    }
    out.artifact("antenna.csv", table_bytes(&rows)?);
    Ok(out)
}

fn fixture_always_fails(cfg: &ExperimentConfig) -> Result<Outcome> {
    let spec = SetSpec::interval(-2.0, 2.0);
    let scan = widomlab::widom_scan(&spec, &cfg.degrees_or([2]), &cfg.solver)?;
    let mut out = Outcome::default();
    for r in &scan.rows {
        out.check(format!("widom < 2 at n={}", r.n), r.widom < 2.0, format!("{}", r.widom));
    }
    out.artifact("widom.csv", table_bytes(&scan.records())?);
    Ok(out)
}
