use num_complex::Complex64;
use rayon::prelude::*;

use super::lp::cutting_plane_polish;
use super::{extreme_band, finish, ChebyshevSolution, Diagnostics, Method, SolveStatus, SolverConfig, MAX_SOLVER_DEGREE};
use crate::error::{Error, Result};
use crate::poly::ComplexPoly;
use crate::sets::{self, SetSpec};

/// Iterations without a relative improvement of `rel_tol` in either the
/// best max or the weighted-rms lower bound before the inner loop stops.
const STAGNATION_WINDOW: usize = 50;

/// Relative change of max|r| between iterations below which the exponent is
/// doubled.
const EXPONENT_SWITCH: f64 = 1e-3;

const PAR_THRESHOLD: usize = 4096;

/// Largest degree for the cutting-plane polish that follows an unconverged
/// Lawson run; the dense LP grows with the square of the degree.
const POLISH_MAX_DEGREE: usize = 24;

/// Lawson iterations spent locating the extremal set before the polish.
const LAWSON_BUDGET_BEFORE_POLISH: usize = 300;

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    // sum a_j * conj(b_j); fixed chunks keep the rounding independent of
    // the thread count.
    if a.len() >= PAR_THRESHOLD {
        let partial: Vec<Complex64> = a
            .par_chunks(1024)
            .zip(b.par_chunks(1024))
            .map(|(x, y)| x.iter().zip(y).map(|(x, y)| x * y.conj()).sum())
            .collect();
        partial.iter().sum()
    } else {
        a.iter().zip(b).map(|(x, y)| x * y.conj()).sum()
    }
}

fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Monic least-squares polynomial `argmin sum w_j |p(z_j)|^2` over monic
/// `p` of degree `n`, via weighted Arnoldi (Stieltjes with reorthogonalized
/// Gram-Schmidt). Returns `p(z_j)` and the power-basis coefficients.
pub fn weighted_monic_lsq(z: &[Complex64], w: &[f64], n: usize) -> Result<(Vec<Complex64>, ComplexPoly)> {
    let (u, c) = arnoldi(z, w, n)?;
    let lc = c[n][n];
    let vals: Vec<Complex64> = u[n].iter().map(|x| x / lc).collect();
    let mut coeffs: Vec<Complex64> = c[n].iter().map(|x| x / lc).collect();
    coeffs[n] = Complex64::new(1.0, 0.0);
    Ok((vals, ComplexPoly::new(coeffs)))
}

/// Degrees `0..=n` of the discretely orthonormal basis for the weights `w`:
/// values at `z` (unweighted) and power-basis coefficients.
#[allow(clippy::type_complexity)]
pub(crate) fn arnoldi(z: &[Complex64], w: &[f64], n: usize) -> Result<(Vec<Vec<Complex64>>, Vec<Vec<Complex64>>)> {
    let m = z.len();
    if m != w.len() || m <= n {
        return Err(Error::SampleTooSmall { got: m, need: n + 1 });
    }
    let sw: Vec<f64> = w.iter().map(|x| x.max(0.0).sqrt()).collect();
    let n0 = sw.iter().map(|s| s * s).sum::<f64>().sqrt();
    if !(n0 > 0.0) {
        return Err(Error::BasisBreakdown { degree: 0 });
    }
    // v: weighted basis vectors, u: the same polynomials unweighted,
    // c: their power-basis coefficients.
    let mut v: Vec<Vec<Complex64>> = vec![sw.iter().map(|&s| Complex64::new(s / n0, 0.0)).collect()];
    let mut u: Vec<Vec<Complex64>> = vec![vec![Complex64::new(1.0 / n0, 0.0); m]];
    let mut c: Vec<Vec<Complex64>> = vec![vec![Complex64::new(1.0 / n0, 0.0)]];
    for k in 0..n {
        let mut nv: Vec<Complex64> = z.iter().zip(&v[k]).map(|(a, b)| a * b).collect();
        let mut nu: Vec<Complex64> = z.iter().zip(&u[k]).map(|(a, b)| a * b).collect();
        let mut nc = Vec::with_capacity(k + 2);
        nc.push(Complex64::new(0.0, 0.0));
        nc.extend_from_slice(&c[k]);
        let before = norm(&nv);
        for _pass in 0..2 {
            for i in 0..=k {
                let h = dot(&nv, &v[i]);
                for (x, y) in nv.iter_mut().zip(&v[i]) {
                    *x -= h * y;
                }
                for (x, y) in nu.iter_mut().zip(&u[i]) {
                    *x -= h * y;
                }
                for (x, y) in nc.iter_mut().zip(&c[i]) {
                    *x -= h * y;
                }
            }
        }
        let h = norm(&nv);
        if !(h > 1e-13 * before) || !h.is_finite() {
            return Err(Error::BasisBreakdown { degree: k + 1 });
        }
        let s = 1.0 / h;
        nv.iter_mut().for_each(|x| *x *= s);
        nu.iter_mut().for_each(|x| *x *= s);
        nc.iter_mut().for_each(|x| *x *= s);
        v.push(nv);
        u.push(nu);
        c.push(nc);
    }
    Ok((u, c))
}

pub(crate) struct LawsonOutcome {
    pub poly: ComplexPoly,
    pub max: f64,
    pub lower: f64,
    pub spread: f64,
    pub weights: Vec<f64>,
    pub iterations: usize,
    pub status: SolveStatus,
}

/// Lawson iteration on a fixed point set, started from `w0`.
pub(crate) fn lawson(z: &[Complex64], w0: &[f64], n: usize, cfg: &SolverConfig) -> Result<LawsonOutcome> {
    let mut w = normalized(w0);
    let mut beta = cfg.lawson_exponent;
    let mut best: Option<LawsonOutcome> = None;
    let mut best_lower = 0.0f64;
    let mut hist: Vec<(f64, f64)> = Vec::new();
    let mut prev_max = f64::INFINITY;
    for it in 0..cfg.max_iters {
        let (vals, poly) = weighted_monic_lsq(z, &w, n)?;
        let absr: Vec<f64> = vals.iter().map(|r| r.norm()).collect();
        let max = absr.iter().cloned().fold(0.0, f64::max);
        let rms = absr.iter().zip(&w).map(|(r, w)| w * r * r).sum::<f64>().sqrt();
        let spread = if max > 0.0 { (max - rms) / max } else { 0.0 };
        best_lower = best_lower.max(rms);
        if best.as_ref().map_or(true, |b| max < b.max) {
            best = Some(LawsonOutcome {
                poly,
                max,
                lower: best_lower,
                spread,
                weights: w.clone(),
                iterations: it + 1,
                status: SolveStatus::IterationCap,
            });
        }
        let b = best.as_mut().unwrap();
        b.lower = best_lower;
        b.iterations = it + 1;
        if spread < cfg.rel_tol || max == 0.0 {
            b.status = SolveStatus::Converged;
            break;
        }
        hist.push((b.max, best_lower));
        if it >= STAGNATION_WINDOW {
            let (old_max, old_lower) = hist[it - STAGNATION_WINDOW];
            let gain_max = (old_max - b.max) / b.max;
            let gain_lower = (best_lower - old_lower) / b.max;
            if gain_max < cfg.rel_tol && gain_lower < cfg.rel_tol {
                b.status = SolveStatus::Converged;
                break;
            }
        }
        if ((prev_max - max) / max).abs() < EXPONENT_SWITCH {
            beta = (2.0 * beta).min(1.0);
        }
        prev_max = max;
        for (wj, r) in w.iter_mut().zip(&absr) {
            *wj *= (r / max).powf(beta);
        }
        w = normalized(&w);
    }
    let mut out = best.expect("max_iters >= 1");
    out.lower = best_lower;
    Ok(out)
}

fn normalized(w: &[f64]) -> Vec<f64> {
    let top = w.iter().cloned().fold(0.0, f64::max);
    let floor = 1e-30 * top;
    let mut out: Vec<f64> = w.iter().map(|&x| x.max(floor)).collect();
    let s: f64 = out.iter().sum();
    out.iter_mut().for_each(|x| *x /= s);
    out
}

/// General complex Chebyshev solver: Lawson reweighting on the boundary
/// sample with adaptive refinement near the maxima of the residual.
pub fn solve_complex(spec: &SetSpec, n: usize, cfg: &SolverConfig) -> Result<ChebyshevSolution> {
    cfg.validate()?;
    if n == 0 || n > MAX_SOLVER_DEGREE {
        return Err(Error::DegreeOutOfRange {
            degree: n,
            max: MAX_SOLVER_DEGREE,
        });
    }
    let m = cfg.m0.max(16 * n);
    let mut sample = sets::sample_boundary(spec, m)?;
    if sample.len() < 8 * n {
        return Err(Error::SampleTooSmall {
            got: sample.len(),
            need: 8 * n,
        });
    }
    let mut weights = sample.param_weights.clone();
    let mut rounds = 0;
    let mut iterations = 0;
    let mut capped = false;
    let mut notes = Vec::new();
    let outcome = loop {
        let polish = n <= POLISH_MAX_DEGREE;
        let budget = SolverConfig {
            max_iters: if polish { cfg.max_iters.min(LAWSON_BUDGET_BEFORE_POLISH) } else { cfg.max_iters },
            ..cfg.clone()
        };
        let mut out = lawson(&sample.points, &weights, n, &budget)?;
        iterations += out.iterations;
        if out.spread >= cfg.rel_tol && polish {
            match cutting_plane_polish(&sample.points, &sample.param_weights, &out.poly, n, cfg.rel_tol) {
                Ok(p) => {
                    iterations += p.rounds;
                    let lower = out.lower.max(p.lower);
                    if p.max < out.max {
                        out.poly = p.poly;
                        out.max = p.max;
                    }
                    out.lower = lower;
                    out.spread = ((out.max - lower) / out.max).max(0.0);
                    out.status = if out.spread < cfg.rel_tol {
                        SolveStatus::Converged
                    } else {
                        SolveStatus::IterationCap
                    };
                }
                Err(e) => {
                    notes.push(format!("cutting-plane polish skipped: {e}"));
                    let rest = SolverConfig {
                        max_iters: cfg.max_iters.saturating_sub(out.iterations).max(1),
                        ..cfg.clone()
                    };
                    let w = out.weights.clone();
                    out = lawson(&sample.points, &w, n, &rest)?;
                    iterations += out.iterations;
                }
            }
        }
        if rounds >= cfg.refine_rounds {
            capped = true;
            break out;
        }
        let refined = match sets::refine_boundary(&sample, &out.poly, spec, cfg.rel_tol) {
            Ok(r) => r,
            Err(Error::RefinementCap { .. }) => {
                capped = true;
                break out;
            }
            Err(e) => {
                notes.push(format!("refinement unavailable: {e}"));
                break out;
            }
        };
        let (next, inserted) = refined;
        if inserted == 0 {
            break out;
        }
        rounds += 1;
        let top = out.weights.iter().cloned().fold(0.0, f64::max);
        weights = out.weights;
        weights.extend(std::iter::repeat(top).take(inserted));
        sample = next;
    };
    let mut status = outcome.status;
    if capped && status == SolveStatus::Converged {
        status = SolveStatus::RefinementCap;
    }
    let (poly, maxima, t_n) = symmetrized(spec, &sample, outcome.poly, n)?;
    let band = extreme_band(outcome.spread);
    let extreme = maxima
        .into_iter()
        .filter(|m| m.1 >= (1.0 - band) * t_n)
        .map(|m| m.0)
        .collect();
    let diag = Diagnostics {
        status,
        iterations,
        refinement_rounds: rounds,
        sample_size: sample.len(),
        residual_spread: outcome.spread,
        lower_bound: outcome.lower.min(t_n),
        notes,
    };
    finish(spec, n, poly, t_n, Method::Lawson, extreme, diag)
}

fn sup_on(sample: &sets::BoundarySample, poly: &ComplexPoly, spec: &SetSpec) -> Result<(Vec<(Complex64, f64)>, f64)> {
    let maxima = sets::boundary_maxima(sample, poly, spec, 0.9)?;
    let disc = sample.max_abs(poly);
    let t = maxima.iter().map(|m| m.1).fold(disc, f64::max);
    Ok((maxima, t))
}

/// Projects `poly` onto the symmetry class of the set (real coefficients,
/// parity `n`). Averaging with the mirrored polynomial cannot raise the sup
/// norm on a symmetric set; the projection is kept only if the measured sup
/// agrees.
fn symmetrized(
    spec: &SetSpec,
    sample: &sets::BoundarySample,
    poly: ComplexPoly,
    n: usize,
) -> Result<(ComplexPoly, Vec<(Complex64, f64)>, f64)> {
    let (maxima, t) = sup_on(sample, &poly, spec)?;
    let conj = spec.is_conjugation_symmetric();
    let odd = spec.is_odd_symmetric();
    if !conj && !odd {
        return Ok((poly, maxima, t));
    }
    let coeffs = poly
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, &c)| {
            let c = if conj { Complex64::new(c.re, 0.0) } else { c };
            if odd && (n - k) % 2 == 1 {
                Complex64::new(0.0, 0.0)
            } else {
                c
            }
        })
        .collect();
    let sym = ComplexPoly::new(coeffs);
    let (sym_maxima, sym_t) = sup_on(sample, &sym, spec)?;
    if sym_t <= t * (1.0 + 1e-12) {
        Ok((sym, sym_maxima, sym_t))
    } else {
        Ok((poly, maxima, t))
    }
}
