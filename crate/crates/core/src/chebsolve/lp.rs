use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::lawson::arnoldi;
use crate::error::{Error, Result};
use crate::poly::ComplexPoly;
use crate::sets::BoundarySample;

pub const LP_MAX_DEGREE: usize = 12;
pub const LP_MAX_POINTS: usize = 2000;
const MAX_IPM_ITERS: usize = 200;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LpOutcome {
    pub poly: ComplexPoly,
    /// Max of `|p|` over the sample for the LP minimizer.
    pub t_n: f64,
    /// LP optimum: a lower bound on the discrete minimax value.
    pub objective: f64,
    pub iterations: usize,
}

/// Discrete minimax by linear programming: minimize `t` subject to
/// `Re(e^{i theta_k} p(z_j)) <= t` for `k_angles` uniform rotations.
/// The polygonal modulus makes the optimum at most a factor
/// `1/cos(pi/k_angles)` off the true discrete value.
pub fn lp_oracle(sample: &BoundarySample, n: usize, k_angles: usize) -> Result<LpOutcome> {
    if n == 0 || n > LP_MAX_DEGREE {
        return Err(Error::DegreeOutOfRange {
            degree: n,
            max: LP_MAX_DEGREE,
        });
    }
    if sample.len() > LP_MAX_POINTS {
        return Err(Error::TooFewSamplePoints {
            requested: sample.len(),
            available: LP_MAX_POINTS,
        });
    }
    if k_angles < 3 {
        return Err(Error::Config("k_angles must be at least 3".into()));
    }
    let z = &sample.points;
    let m = z.len();
    let (u, c) = arnoldi(z, &vec![1.0; m], n)?;
    let lc = c[n][n];
    let base: Vec<Complex64> = u[n].iter().map(|x| x / lc).collect();
    let scale = base.iter().map(|x| x.norm()).fold(0.0, f64::max).max(1e-300);

    // Unknowns: Re a_l, Im a_l (l < n), then t. Residual p = base + sum a_l u_l.
    let nv = 2 * n + 1;
    let rows = m * k_angles;
    let mut a = DMatrix::<f64>::zeros(rows, nv);
    let mut b = DVector::<f64>::zeros(rows);
    for k in 0..k_angles {
        let rot = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / k_angles as f64);
        for j in 0..m {
            let r = k * m + j;
            for l in 0..n {
                let q = rot * u[l][j];
                a[(r, l)] = q.re;
                a[(r, n + l)] = -q.im;
            }
            a[(r, 2 * n)] = -1.0;
            b[r] = -(rot * base[j]).re / scale;
        }
    }
    let mut cost = DVector::<f64>::zeros(nv);
    cost[2 * n] = 1.0;
    let res = ipm(&a, &b, &cost)?;
    let (y, iterations) = (res.y, res.iterations);

    let mut coeffs: Vec<Complex64> = c[n].iter().map(|x| x / lc).collect();
    coeffs[n] = Complex64::new(0.0, 0.0);
    for l in 0..n {
        let al = Complex64::new(y[l], y[n + l]) * scale;
        for (dst, src) in coeffs.iter_mut().zip(&c[l]) {
            *dst += al * src;
        }
    }
    coeffs[n] = Complex64::new(1.0, 0.0);
    let poly = ComplexPoly::new(coeffs);
    let t_n = (0..m)
        .map(|j| {
            let mut r = base[j];
            for l in 0..n {
                r += Complex64::new(y[l], y[n + l]) * scale * u[l][j];
            }
            r.norm()
        })
        .fold(0.0, f64::max);
    Ok(LpOutcome {
        poly,
        t_n,
        objective: y[2 * n] * scale,
        iterations,
    })
}

/// Outcome of the cutting-plane polish.
pub(crate) struct Polished {
    pub poly: ComplexPoly,
    pub max: f64,
    /// LP optimum over the accumulated cuts: a lower bound on the discrete
    /// minimax value.
    pub lower: f64,
    pub rounds: usize,
}

const POLISH_ROUNDS: usize = 80;
const INITIAL_ANGLES: usize = 8;

/// Discrete minimax by Kelley cutting planes on the modulus, started from the
/// monic polynomial `start`; corrections live in the span of degrees below
/// `n`, orthonormalized for `basis_weights`. Each round cuts every
/// strongly violated point at the phase of its residual, so the LP value
/// rises to the discrete minimax from below while the best iterate bounds it
/// from above.
pub(crate) fn cutting_plane_polish(
    z: &[Complex64],
    basis_weights: &[f64],
    start: &ComplexPoly,
    n: usize,
    rel_tol: f64,
) -> Result<Polished> {
    let m = z.len();
    let total: f64 = basis_weights.iter().sum();
    let w: Vec<f64> = basis_weights.iter().map(|x| x / total).collect();
    let (u, c) = arnoldi(z, &w, n - 1)?;
    let base: Vec<Complex64> = z.iter().map(|&x| start.eval(x)).collect();
    let scale = base.iter().map(|x| x.norm()).fold(0.0, f64::max).max(1e-300);
    let nv = 2 * n + 1;

    // Rows of the growing LP: (point, phase). Box rows are added in `assemble`.
    let mut cuts: Vec<(usize, f64)> = Vec::new();
    for (j, b) in base.iter().enumerate() {
        if b.norm() >= 0.9 * scale {
            for k in 0..INITIAL_ANGLES {
                cuts.push((j, b.arg() + 2.0 * std::f64::consts::PI * k as f64 / INITIAL_ANGLES as f64));
            }
        }
    }
    let residuals = |a: &DVector<f64>| -> Vec<Complex64> {
        (0..m)
            .map(|j| {
                let mut r = base[j] / scale;
                for l in 0..n {
                    r += Complex64::new(a[l], a[n + l]) * u[l][j];
                }
                r
            })
            .collect()
    };
    let mut best_a = DVector::<f64>::zeros(nv);
    let mut best_max = 1.0;
    let mut lower = 0.0f64;
    let mut cost = DVector::<f64>::zeros(nv);
    cost[2 * n] = 1.0;
    let mut rounds = 0;
    while rounds < POLISH_ROUNDS {
        rounds += 1;
        let rows = cuts.len() + 4 * n;
        let mut a = DMatrix::<f64>::zeros(rows, nv);
        let mut b = DVector::<f64>::zeros(rows);
        for (r, &(j, phi)) in cuts.iter().enumerate() {
            let rot = Complex64::from_polar(1.0, -phi);
            for l in 0..n {
                let q = rot * u[l][j];
                a[(r, l)] = q.re;
                a[(r, n + l)] = -q.im;
            }
            a[(r, 2 * n)] = -1.0;
            b[r] = -(rot * base[j]).re / scale;
        }
        // Orthonormality in the normalized weighted norm bounds every
        // coefficient of a competitor with sup <= 1 by 2.
        for l in 0..2 * n {
            let r = cuts.len() + 2 * l;
            a[(r, l)] = 1.0;
            b[r] = 4.0;
            a[(r + 1, l)] = -1.0;
            b[r + 1] = 4.0;
        }
        let res = ipm(&a, &b, &cost)?;
        let y = res.y;
        // Coefficients are boxed by 4 and t is at most 1 in these units.
        let slack: f64 = (0..2 * n).map(|i| 4.0 * res.rd[i].abs()).sum::<f64>() + res.rd[2 * n].abs();
        lower = lower.max((res.dual - slack).min(y[2 * n]));
        let r = residuals(&y);
        let mags: Vec<f64> = r.iter().map(|x| x.norm()).collect();
        let max = mags.iter().cloned().fold(0.0, f64::max);
        if max < best_max {
            best_max = max;
            best_a = y.clone();
        }
        if (best_max - lower) / best_max < rel_tol {
            break;
        }
        let mut viol: Vec<usize> = (0..m).filter(|&j| mags[j] > y[2 * n] * (1.0 + 0.5 * rel_tol)).collect();
        viol.sort_by(|&i, &j| mags[j].partial_cmp(&mags[i]).unwrap());
        viol.truncate(16 * n);
        if viol.is_empty() {
            // Every point is within rel_tol/2 of the LP value, itself below
            // the discrete minimax up to the solver tolerance.
            lower = lower.max(y[2 * n].min(best_max));
            break;
        }
        cuts.extend(viol.into_iter().map(|j| (j, r[j].arg())));
    }
    let mut coeffs: Vec<Complex64> = start.coeffs().to_vec();
    for l in 0..n {
        let al = Complex64::new(best_a[l], best_a[n + l]) * scale;
        for (dst, src) in coeffs.iter_mut().zip(&c[l]) {
            *dst += al * src;
        }
    }
    coeffs[n] = Complex64::new(1.0, 0.0);
    Ok(Polished {
        poly: ComplexPoly::new(coeffs),
        max: best_max * scale,
        lower: lower * scale,
        rounds,
    })
}

/// Mehrotra predictor-corrector for `min c'y  s.t.  A y <= b`, with slack
/// `s = b - A y` and multipliers `lambda`.
struct IpmResult {
    y: DVector<f64>,
    /// `-b'lambda`.
    dual: f64,
    /// `A'lambda + c`; the dual objective is a lower bound on the optimum
    /// once corrected by `|rd|` against bounds on the primal variables.
    rd: DVector<f64>,
    iterations: usize,
}

fn ipm(a: &DMatrix<f64>, b: &DVector<f64>, cost: &DVector<f64>) -> Result<IpmResult> {
    let (rows, nv) = a.shape();
    let mut y = DVector::<f64>::zeros(nv);
    // Start with t above every constraint so the slacks are positive.
    let t_col = nv - 1;
    let worst = b.iter().map(|v| -v).fold(0.0, f64::max);
    y[t_col] = worst + 1.0;
    let mut s = b - a * &y;
    let mut lam = DVector::<f64>::from_element(rows, 1.0 / rows as f64);
    let bnorm = 1.0 + b.amax();
    for it in 0..MAX_IPM_ITERS {
        let rd = a.transpose() * &lam + cost;
        let rp = a * &y + &s - b;
        let mu = s.dot(&lam) / rows as f64;
        let scale_obj = 1.0 + cost.dot(&y).abs();
        let done = rp.amax() < 1e-10 * bnorm && rd.amax() < 1e-10;
        // Past this point the complementarity gap only underflows.
        if (mu < 1e-13 * scale_obj && done) || mu < 1e-20 * scale_obj {
            if rp.amax() > 1e-6 * bnorm {
                return Err(Error::LinearProgram("primal residual did not close".into()));
            }
            return Ok(IpmResult {
                dual: -b.dot(&lam),
                y,
                rd,
                iterations: it,
            });
        }
        let d = lam.component_div(&s);
        let mut da = a.clone();
        for (r, &dr) in d.iter().enumerate() {
            da.row_mut(r).scale_mut(dr);
        }
        let normal = a.transpose() * da;
        let top = 1.0 + normal.diagonal().amax();
        let mut ridge = 1e-14 * top;
        let chol = loop {
            let mut reg = normal.clone();
            for i in 0..nv {
                reg[(i, i)] += ridge;
            }
            if let Some(ch) = reg.cholesky() {
                break ch;
            }
            ridge *= 1e3;
            if ridge > 1e-5 * top {
                return Err(Error::LinearProgram("normal equations lost definiteness".into()));
            }
        };

        let solve_dir = |rc: &DVector<f64>| {
            // g = -rp - rc / lambda
            let g = -&rp - rc.component_div(&lam);
            let rhs = -&rd + a.transpose() * d.component_mul(&g);
            let dy = chol.solve(&rhs);
            let dl = d.component_mul(&(a * &dy - &g));
            let ds = (rc - s.component_mul(&dl)).component_div(&lam);
            (dy, dl, ds)
        };

        let rc_aff = -s.component_mul(&lam);
        let (_, dl_a, ds_a) = solve_dir(&rc_aff);
        let ap = max_step(&s, &ds_a).min(1.0);
        let ad = max_step(&lam, &dl_a).min(1.0);
        let mu_aff = (&s + &ds_a * ap).dot(&(&lam + &dl_a * ad)) / rows as f64;
        let sigma = (mu_aff / mu).powi(3).min(1.0);
        let rc = -s.component_mul(&lam) - ds_a.component_mul(&dl_a) + DVector::from_element(rows, sigma * mu);
        let (dy, dl, ds) = solve_dir(&rc);
        let ap = (0.99 * max_step(&s, &ds)).min(1.0);
        let ad = (0.99 * max_step(&lam, &dl)).min(1.0);
        y += &dy * ap;
        s += &ds * ap;
        lam += &dl * ad;
        if !y.iter().all(|v| v.is_finite()) {
            return Err(Error::LinearProgram("non-finite iterate".into()));
        }
    }
    Err(Error::LinearProgram(format!(
        "no convergence in {MAX_IPM_ITERS} interior-point iterations"
    )))
}

/// Largest step in (0, 1/0.99] keeping `x + step dx` nonnegative.
fn max_step(x: &DVector<f64>, dx: &DVector<f64>) -> f64 {
    let mut step = 1.0 / 0.99;
    for (xi, di) in x.iter().zip(dx.iter()) {
        if *di < 0.0 {
            step = f64::min(step, -xi / di);
        }
    }
    step
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tiny_lp() {
        // min t s.t. x - t <= 1, -x - t <= -3 (t >= 3 - x, t >= x - 1): optimum x = 2, t = 1.
        let a = DMatrix::from_row_slice(2, 2, &[1.0, -1.0, -1.0, -1.0]);
        let b = DVector::from_vec(vec![1.0, -3.0]);
        let c = DVector::from_vec(vec![0.0, 1.0]);
        let res = ipm(&a, &b, &c).unwrap();
        let y = res.y;
        assert!((res.dual - 1.0).abs() < 1e-8);
        assert!((y[0] - 2.0).abs() < 1e-8 && (y[1] - 1.0).abs() < 1e-8, "{y}");
    }
}
