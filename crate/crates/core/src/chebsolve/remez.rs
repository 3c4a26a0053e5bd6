use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::{extreme_band, finish, ChebyshevSolution, Diagnostics, Method, SolveStatus, SolverConfig, MAX_SOLVER_DEGREE};
use crate::error::{Error, Result};
use crate::poly::ComplexPoly;
use crate::potential::{golden_max, leja_from_candidates};
use crate::sets::SetSpec;

const MAX_RESTARTS: usize = 3;
const MAX_EXCHANGES: usize = 200;

/// `sum_k a_k T_k(t)` by Clenshaw.
fn cheb_eval(a: &[f64], t: f64) -> f64 {
    let (mut b1, mut b2) = (0.0, 0.0);
    for &c in a.iter().skip(1).rev() {
        let b0 = 2.0 * t * b1 - b2 + c;
        b2 = b1;
        b1 = b0;
    }
    t * b1 - b2 + a[0]
}

fn cheb_t(k: usize, t: f64) -> f64 {
    if t.abs() <= 1.0 {
        (k as f64 * t.acos()).cos()
    } else {
        let mut e = vec![0.0; k + 1];
        e[k] = 1.0;
        cheb_eval(&e, t)
    }
}

/// Power-basis polynomial in `t` of `sum_k a_k T_k(t)`.
fn cheb_to_power(a: &[f64]) -> ComplexPoly {
    let two_t = ComplexPoly::from_real(&[0.0, 2.0]);
    let mut prev = ComplexPoly::one();
    let mut cur = ComplexPoly::x();
    let mut acc = ComplexPoly::constant(Complex64::new(a[0], 0.0));
    for (k, &c) in a.iter().enumerate().skip(1) {
        if k > 1 {
            let next = &(&two_t * &cur) - &prev;
            prev = cur;
            cur = next;
        }
        acc = &acc + &cur.scaled(Complex64::new(c, 0.0));
    }
    acc
}

struct Extremum {
    x: f64,
    q: f64,
}

/// Remez exchange on a finite union of real intervals.
pub fn solve_real(spec: &SetSpec, n: usize, cfg: &SolverConfig) -> Result<ChebyshevSolution> {
    cfg.validate()?;
    if n == 0 || n > MAX_SOLVER_DEGREE {
        return Err(Error::DegreeOutOfRange {
            degree: n,
            max: MAX_SOLVER_DEGREE,
        });
    }
    let mut intervals = spec
        .real_intervals()
        .ok_or_else(|| Error::Unsupported(format!("{} is not a subset of the real line", spec.name())))?;
    intervals.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let lo = intervals[0].0;
    let hi = intervals.iter().map(|i| i.1).fold(f64::NEG_INFINITY, f64::max);
    let c = 0.5 * (lo + hi);
    let h = 0.5 * (hi - lo);
    let to_t = |x: f64| (x - c) / h;

    // Lobatto grids per interval, sized by the interval's share of the hull.
    let total = (64 * n).max(512);
    let mut grids: Vec<Vec<f64>> = Vec::new();
    for &(a, b) in &intervals {
        let g = (((b - a) / (hi - lo)) * total as f64).ceil().max(16.0) as usize;
        grids.push(
            (0..=g)
                .map(|j| {
                    let s = -(std::f64::consts::PI * j as f64 / g as f64).cos();
                    if j == 0 {
                        a
                    } else if j == g {
                        b
                    } else {
                        0.5 * (a + b) + 0.5 * (b - a) * s
                    }
                })
                .collect(),
        );
    }
    let flat: Vec<Complex64> = grids.iter().flatten().map(|&x| Complex64::new(x, 0.0)).collect();
    let (seed, _) = leja_from_candidates(&flat, n + 1)?;
    let mut reference: Vec<f64> = seed.iter().map(|z| z.re).collect();
    reference.sort_by(|a, b| a.partial_cmp(b).unwrap());

    let mut restarts = 0;
    let mut iterations = 0;
    let mut best: Option<(Vec<f64>, f64, f64, Vec<Extremum>)> = None;
    let mut status = SolveStatus::IterationCap;
    while iterations < MAX_EXCHANGES.min(cfg.max_iters) {
        iterations += 1;
        let (a, e) = reference_solve(&reference, n, &to_t)?;
        let q = |x: f64| cheb_eval(&a, to_t(x));
        let ext = extrema(&grids, &q, h);
        let maxerr = ext.iter().map(|p| p.q.abs()).fold(0.0, f64::max);
        let defect = (maxerr - e.abs()) / maxerr;
        if best.as_ref().map_or(true, |b| maxerr < b.1) {
            best = Some((a.clone(), maxerr, defect, Vec::new()));
        }
        if defect < cfg.rel_tol {
            best = Some((a, maxerr, defect, ext));
            status = SolveStatus::Converged;
            break;
        }
        let next = exchange(ext, n)?;
        let moved = next
            .iter()
            .zip(&reference)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        if moved <= 1e-14 * h {
            restarts += 1;
            if restarts > MAX_RESTARTS {
                return Err(Error::Exchange(format!(
                    "alternation defect stagnated at {defect:.3e}"
                )));
            }
            reference = perturb(&next, &intervals, restarts);
        } else {
            reference = next;
        }
    }
    let (a, maxerr, defect, mut ext) = best.expect("at least one exchange step");
    if ext.is_empty() {
        let q = |x: f64| cheb_eval(&a, to_t(x));
        ext = extrema(&grids, &q, h);
    }
    let scale_log = n as f64 * h.ln() - (n as f64 - 1.0) * std::f64::consts::LN_2;
    let t_n = (scale_log + maxerr.ln()).exp();
    let band = extreme_band(defect);
    let extreme: Vec<Complex64> = ext
        .iter()
        .filter(|p| p.q.abs() >= (1.0 - band) * maxerr)
        .map(|p| Complex64::new(p.x, 0.0))
        .collect();
    let poly = cheb_to_power(&a)
        .affine_substitute(Complex64::new(1.0 / h, 0.0), Complex64::new(-c / h, 0.0))
        .to_monic();
    let e_abs = {
        let (_, e) = reference_solve(&reference, n, &to_t)?;
        e.abs()
    };
    let diag = Diagnostics {
        status,
        iterations,
        refinement_rounds: restarts,
        sample_size: grids.iter().map(|g| g.len()).sum(),
        residual_spread: defect,
        lower_bound: (scale_log + e_abs.ln()).exp().min(t_n),
        notes: Vec::new(),
    };
    finish(spec, n, poly, t_n, Method::Remez, extreme, diag)
}

/// Solves `T_n(t_i) + sum_{k<n} a_k T_k(t_i) = (-1)^i E` on the reference.
/// Returns the full coefficient vector (with `a_n = 1`) and `E`.
fn reference_solve(reference: &[f64], n: usize, to_t: &impl Fn(f64) -> f64) -> Result<(Vec<f64>, f64)> {
    let m = n + 1;
    let mut mat = DMatrix::<f64>::zeros(m, m);
    let mut rhs = DVector::<f64>::zeros(m);
    for (i, &x) in reference.iter().enumerate() {
        let t = to_t(x);
        for k in 0..n {
            mat[(i, k)] = cheb_t(k, t);
        }
        mat[(i, n)] = if i % 2 == 0 { -1.0 } else { 1.0 };
        rhs[i] = -cheb_t(n, t);
    }
    let sol = mat
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::Exchange("singular reference system".into()))?;
    let mut a: Vec<f64> = sol.iter().take(n).cloned().collect();
    a.push(1.0);
    Ok((a, sol[n]))
}

/// Local extrema of `q` on each grid, polished by golden section.
fn extrema(grids: &[Vec<f64>], q: &impl Fn(f64) -> f64, h: f64) -> Vec<Extremum> {
    let mut out = Vec::new();
    for g in grids {
        let vals: Vec<f64> = g.iter().map(|&x| q(x)).collect();
        let k = g.len();
        for j in 0..k {
            let v = vals[j].abs();
            let left = j == 0 || vals[j - 1].abs() <= v;
            let right = j + 1 == k || vals[j + 1].abs() <= v;
            if !(left && right) {
                continue;
            }
            if j == 0 || j + 1 == k {
                out.push(Extremum { x: g[j], q: vals[j] });
                continue;
            }
            let f = |x: f64| q(x).abs();
            let x = golden_max(&f, g[j - 1], g[j + 1], 1e-15 * h);
            let (x, qx) = if f(x) >= v { (x, q(x)) } else { (g[j], vals[j]) };
            out.push(Extremum { x, q: qx });
        }
    }
    out.sort_by(|a, b| a.x.partial_cmp(&b.x).unwrap());
    out.dedup_by(|a, b| (a.x - b.x).abs() <= 1e-14 * h.max(1.0) && a.q.signum() == b.q.signum());
    out
}

/// Multi-point exchange: merge same-sign runs keeping the largest, then trim
/// the ends down to `n + 1` alternating points that keep the global maximum.
fn exchange(ext: Vec<Extremum>, n: usize) -> Result<Vec<f64>> {
    let mut alt: Vec<Extremum> = Vec::new();
    for p in ext {
        if p.q == 0.0 {
            continue;
        }
        match alt.last_mut() {
            Some(last) if last.q.signum() == p.q.signum() => {
                if p.q.abs() > last.q.abs() {
                    *last = p;
                }
            }
            _ => alt.push(p),
        }
    }
    if alt.len() < n + 1 {
        return Err(Error::Exchange(format!(
            "only {} alternation points for degree {n}",
            alt.len()
        )));
    }
    let top = alt.iter().map(|p| p.q.abs()).fold(0.0, f64::max);
    while alt.len() > n + 1 {
        let first = alt[0].q.abs();
        let last = alt[alt.len() - 1].q.abs();
        let drop_first = if first == top {
            false
        } else if last == top {
            true
        } else {
            first <= last
        };
        if drop_first {
            alt.remove(0);
        } else {
            alt.pop();
        }
    }
    Ok(alt.into_iter().map(|p| p.x).collect())
}

/// Moves each reference point a small, restart-dependent fraction toward its
/// right neighbour, staying inside its interval.
fn perturb(reference: &[f64], intervals: &[(f64, f64)], restart: usize) -> Vec<f64> {
    let frac = 1e-3 * restart as f64;
    let k = reference.len();
    (0..k)
        .map(|i| {
            let x = reference[i];
            let span = if i + 1 < k { reference[i + 1] - x } else { x - reference[i - 1] };
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            let y = x + sign * frac * span;
            let iv = intervals.iter().find(|iv| iv.0 <= x && x <= iv.1).copied().unwrap_or((y, y));
            y.clamp(iv.0, iv.1)
        })
        .collect()
}
