//! Dense complex polynomials.
//!
//! `ComplexPoly` stores coefficients in ascending degree order. The
//! representation is canonical: the coefficient vector is empty for the zero
//! polynomial and otherwise ends in a nonzero entry.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest degree any constructed polynomial may reach.
pub const DEGREE_CAP: usize = 512;

const EPS: f64 = f64::EPSILON;

#[derive(Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "Vec<[f64; 2]>", into = "Vec<[f64; 2]>")]
pub struct ComplexPoly {
    coeffs: Vec<Complex64>,
}

impl From<Vec<[f64; 2]>> for ComplexPoly {
    fn from(pairs: Vec<[f64; 2]>) -> Self {
        ComplexPoly::new(pairs.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
    }
}

impl From<ComplexPoly> for Vec<[f64; 2]> {
    fn from(p: ComplexPoly) -> Self {
        p.coeffs.iter().map(|c| [c.re, c.im]).collect()
    }
}

impl fmt::Debug for ComplexPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if *c == Complex64::new(0.0, 0.0) {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({}{:+}i)z^{}", c.re, c.im, k)?;
        }
        Ok(())
    }
}

impl ComplexPoly {
    /// Builds a polynomial from ascending coefficients, trimming trailing zeros.
    /// A leading coefficient within one ulp of 1 is snapped to exactly 1.
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.last().is_some_and(|c| c.re == 0.0 && c.im == 0.0) {
            coeffs.pop();
        }
        if let Some(last) = coeffs.last_mut() {
            if (*last - 1.0).norm() <= EPS {
                *last = Complex64::new(1.0, 0.0);
            }
        }
        ComplexPoly { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        ComplexPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Complex64::new(1.0, 0.0))
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(vec![c])
    }

    /// The identity polynomial `z`.
    pub fn x() -> Self {
        Self::from_real(&[0.0, 1.0])
    }

    /// `(z - center)^k`.
    pub fn shifted_power(center: Complex64, k: usize) -> Result<Self> {
        Self::new(vec![-center, Complex64::new(1.0, 0.0)]).pow(k)
    }

    /// Monic polynomial with the given roots.
    pub fn from_roots(roots: &[Complex64]) -> Self {
        let mut coeffs = vec![Complex64::new(1.0, 0.0)];
        for &r in roots {
            let mut next = vec![Complex64::new(0.0, 0.0); coeffs.len() + 1];
            for (k, &c) in coeffs.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= c * r;
            }
            coeffs = next;
        }
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Degree, or `None` for the zero polynomial (degree −1).
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial reported as −1.
    pub fn signed_degree(&self) -> isize {
        self.coeffs.len() as isize - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&Complex64::new(1.0, 0.0))
    }

    pub fn leading(&self) -> Complex64 {
        self.coeffs.last().copied().unwrap_or_default()
    }

    /// True if every coefficient has imaginary part at most `tol` in modulus.
    pub fn is_real(&self, tol: f64) -> bool {
        self.coeffs.iter().all(|c| c.im.abs() <= tol)
    }

    /// Divides through by the leading coefficient.
    pub fn to_monic(&self) -> Self {
        let lead = self.leading();
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs: Vec<_> = self.coeffs.iter().map(|c| c / lead).collect();
        *coeffs.last_mut().unwrap() = Complex64::new(1.0, 0.0);
        Self::new(coeffs)
    }

    /// `max |coefficient|`, the scale used to make tolerances dimensionless.
    pub fn scale(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Horner evaluation.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// Value and first derivative in one Horner pass.
    pub fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    }

    /// Running-error bound for Horner evaluation at `z`.
    pub fn eval_error_bound(&self, z: Complex64) -> f64 {
        let r = z.norm();
        let absolute = self.coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm());
        4.0 * (self.coeffs.len() as f64 + 1.0) * EPS * absolute
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    pub fn nth_derivative(&self, k: usize) -> Self {
        (0..k).fold(self.clone(), |p, _| p.derivative())
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * factor).collect())
    }

    pub fn pow(&self, k: usize) -> Result<Self> {
        let deg = self.degree().unwrap_or(0);
        if deg.saturating_mul(k) > DEGREE_CAP {
            return Err(Error::DegreeOverflow {
                degree: deg.saturating_mul(k),
                cap: DEGREE_CAP,
            });
        }
        let mut result = Self::one();
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        Ok(result)
    }

    /// `outer(inner(z))`, expanded by Horner's scheme in the polynomial ring.
    pub fn compose(outer: &Self, inner: &Self) -> Result<Self> {
        let d_out = outer.degree().unwrap_or(0);
        let d_in = inner.degree().unwrap_or(0);
        if d_out.saturating_mul(d_in) > DEGREE_CAP {
            return Err(Error::DegreeOverflow {
                degree: d_out.saturating_mul(d_in),
                cap: DEGREE_CAP,
            });
        }
        let mut acc = Self::zero();
        for &c in outer.coeffs.iter().rev() {
            acc = &(&acc * inner) + &Self::constant(c);
        }
        Ok(acc)
    }

    /// `p(scale * z + shift)`.
    pub fn affine_substitute(&self, scale: Complex64, shift: Complex64) -> Self {
        Self::compose(self, &Self::new(vec![shift, scale])).expect("affine substitution keeps degree")
    }

    /// All roots with multiplicities.
    pub fn roots(&self, cfg: &RootConfig) -> Result<RootSet> {
        find_roots(self, cfg)
    }
}

impl Add for &ComplexPoly {
    type Output = ComplexPoly;
    fn add(self, rhs: &ComplexPoly) -> ComplexPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let zero = Complex64::new(0.0, 0.0);
        ComplexPoly::new(
            (0..n)
                .map(|k| {
                    self.coeffs.get(k).copied().unwrap_or(zero)
                        + rhs.coeffs.get(k).copied().unwrap_or(zero)
                })
                .collect(),
        )
    }
}

impl Neg for &ComplexPoly {
    type Output = ComplexPoly;
    fn neg(self) -> ComplexPoly {
        ComplexPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Sub for &ComplexPoly {
    type Output = ComplexPoly;
    fn sub(self, rhs: &ComplexPoly) -> ComplexPoly {
        self + &(-rhs)
    }
}

impl Mul for &ComplexPoly {
    type Output = ComplexPoly;
    fn mul(self, rhs: &ComplexPoly) -> ComplexPoly {
        if self.is_zero() || rhs.is_zero() {
            return ComplexPoly::zero();
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        ComplexPoly::new(out)
    }
}

/// Settings for [`ComplexPoly::roots`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RootConfig {
    pub max_iters: usize,
    /// Residual contract: `|p(w)| <= polish_tol * scale(p)`, unless the residual
    /// is already at the rounding floor of Horner evaluation.
    pub polish_tol: f64,
    /// Roots closer than `cluster_radius * max(1, |w|)` are merged.
    pub cluster_radius: f64,
}

impl Default for RootConfig {
    fn default() -> Self {
        RootConfig {
            max_iters: 500,
            polish_tol: 1e-10,
            cluster_radius: 1e-6,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Root {
    pub value: Complex64,
    pub multiplicity: usize,
    /// `|p(value)|` after polishing.
    pub residual: f64,
}

#[derive(Clone, Debug)]
pub struct RootSet {
    pub roots: Vec<Root>,
    pub iterations: usize,
}

impl RootSet {
    pub fn total_multiplicity(&self) -> usize {
        self.roots.iter().map(|r| r.multiplicity).sum()
    }

    /// Roots repeated according to multiplicity.
    pub fn expanded(&self) -> Vec<Complex64> {
        self.roots
            .iter()
            .flat_map(|r| std::iter::repeat_n(r.value, r.multiplicity))
            .collect()
    }
}

fn find_roots(p: &ComplexPoly, cfg: &RootConfig) -> Result<RootSet> {
    let n = match p.degree() {
        Some(d) if d >= 1 => d,
        _ => {
            return Err(Error::InvalidSpec(
                "root finding needs a polynomial of degree >= 1".into(),
            ))
        }
    };
    let monic = p.to_monic();
    let coeffs = monic.coeffs();

    // Exact zero roots are factored out before iterating.
    let zero_mult = coeffs.iter().take_while(|c| c.norm() == 0.0).count();
    let reduced = ComplexPoly::new(coeffs[zero_mult..].to_vec());
    let m = n - zero_mult;

    let mut estimates: Vec<Complex64> = Vec::new();
    let mut iterations = 0;
    if m == 1 {
        estimates.push(-reduced.coeffs()[0]);
    } else if m > 1 {
        let (est, iters) = aberth(&reduced, cfg.max_iters)?;
        estimates = est;
        iterations = iters;
    }

    let mut roots = cluster_and_polish(&reduced, &estimates, cfg);
    if zero_mult > 0 {
        roots.push(Root {
            value: Complex64::new(0.0, 0.0),
            multiplicity: zero_mult,
            residual: 0.0,
        });
    }
    for r in roots.iter_mut() {
        r.residual = monic.eval(r.value).norm();
    }

    let scale = monic.scale();
    let worst = roots
        .iter()
        .filter(|r| r.residual > cfg.polish_tol * scale && r.residual > monic.eval_error_bound(r.value))
        .map(|r| r.residual)
        .fold(0.0, f64::max);
    if worst > 0.0 {
        return Err(Error::RootsNotConverged {
            iterations,
            worst_residual: worst,
        });
    }
    roots.sort_by(|a, b| {
        a.value
            .re
            .partial_cmp(&b.value.re)
            .unwrap()
            .then(a.value.im.partial_cmp(&b.value.im).unwrap())
    });
    Ok(RootSet { roots, iterations })
}

/// Aberth–Ehrlich simultaneous iteration from a perturbed circle.
fn aberth(p: &ComplexPoly, max_iters: usize) -> Result<(Vec<Complex64>, usize)> {
    let n = p.degree().unwrap();
    let coeffs = p.coeffs();
    let center = -coeffs[n - 1] / (n as f64);

    // Radius from the constant term of the Taylor-shifted polynomial.
    let shifted = taylor_shift(coeffs, center);
    let mut radius = shifted[0].norm().powf(1.0 / n as f64);
    if !(radius.is_finite() && radius > 0.0) {
        radius = (1..=n)
            .map(|k| shifted[n - k].norm().powf(1.0 / k as f64))
            .fold(0.0, f64::max)
            .max(1e-3);
    }
    let mut w: Vec<Complex64> = (0..n)
        .map(|k| {
            let theta = std::f64::consts::TAU * k as f64 / n as f64 + 0.7;
            center + Complex64::from_polar(radius, theta)
        })
        .collect();

    let mut done = vec![false; n];
    for iter in 1..=max_iters {
        for k in 0..n {
            if done[k] {
                continue;
            }
            let (pv, dpv) = p.eval_with_derivative(w[k]);
            if pv.norm() <= p.eval_error_bound(w[k]) {
                done[k] = true;
                continue;
            }
            let ratio = pv / dpv;
            let sum: Complex64 = (0..n)
                .filter(|&j| j != k)
                .map(|j| (w[k] - w[j]).inv())
                .sum();
            let corr = ratio / (1.0 - ratio * sum);
            if !corr.re.is_finite() || !corr.im.is_finite() {
                // Nudge off a coincidence and keep going.
                let bump = Complex64::new(1e-8, 1e-8) * (1.0 + w[k].norm());
                w[k] += bump;
                continue;
            }
            w[k] -= corr;
            if corr.norm() <= 2.0 * EPS * w[k].norm() {
                done[k] = true;
            }
        }
        if done.iter().all(|&d| d) {
            return Ok((w, iter));
        }
    }
    // Accept if every estimate sits at the rounding floor.
    let worst = w
        .iter()
        .map(|&z| p.eval(z).norm() / p.eval_error_bound(z).max(f64::MIN_POSITIVE))
        .fold(0.0, f64::max);
    if worst <= 1e3 {
        return Ok((w, max_iters));
    }
    Err(Error::RootsNotConverged {
        iterations: max_iters,
        worst_residual: w.iter().map(|&z| p.eval(z).norm()).fold(0.0, f64::max),
    })
}

fn taylor_shift(coeffs: &[Complex64], c: Complex64) -> Vec<Complex64> {
    let mut a = coeffs.to_vec();
    let n = a.len();
    for i in 0..n {
        for j in (i..n - 1).rev() {
            let t = a[j + 1] * c;
            a[j] += t;
        }
    }
    a
}

/// Groups estimates into clusters (multiple roots) and polishes each cluster
/// center with Newton's method on the derivative that has a simple root there.
fn cluster_and_polish(p: &ComplexPoly, est: &[Complex64], cfg: &RootConfig) -> Vec<Root> {
    let n = est.len();
    if n == 0 {
        return Vec::new();
    }
    let deg = p.degree().unwrap() as f64;
    // Per-estimate uncertainty: deg * |p/p'| dominates the spread of a cluster
    // around a multiple root and is tiny for well separated simple roots.
    let uncertainty: Vec<f64> = est
        .iter()
        .map(|&z| {
            let (pv, dpv) = p.eval_with_derivative(z);
            let u = if dpv.norm() > 0.0 {
                deg * (pv / dpv).norm()
            } else {
                0.0
            };
            u.min(0.25 * (1.0 + z.norm()))
        })
        .collect();

    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while parent[r] != r {
            r = parent[r];
        }
        let mut k = i;
        while parent[k] != r {
            let next = parent[k];
            parent[k] = r;
            k = next;
        }
        r
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let d = (est[i] - est[j]).norm();
            let radius = cfg.cluster_radius * est[i].norm().max(est[j].norm()).max(1.0);
            if d <= radius || d <= uncertainty[i] + uncertainty[j] {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[b] = a;
                }
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..n {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }

    groups
        .into_values()
        .map(|members| {
            let m = members.len();
            let centroid = members.iter().map(|&i| est[i]).sum::<Complex64>() / m as f64;
            let value = newton_polish(&p.nth_derivative(m - 1), centroid);
            Root {
                value,
                multiplicity: m,
                residual: 0.0,
            }
        })
        .collect()
}

fn newton_polish(q: &ComplexPoly, start: Complex64) -> Complex64 {
    let mut z = start;
    let mut best = q.eval(z).norm();
    for _ in 0..8 {
        let (v, dv) = q.eval_with_derivative(z);
        if dv.norm() == 0.0 || v.norm() == 0.0 {
            break;
        }
        let cand = z - v / dv;
        let r = q.eval(cand).norm();
        if !(r < best) {
            break;
        }
        best = r;
        z = cand;
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn zero_polynomial_has_degree_minus_one() {
        let z = ComplexPoly::from_real(&[0.0, 0.0]);
        assert!(z.is_zero());
        assert_eq!(z.degree(), None);
        assert_eq!(z.signed_degree(), -1);
    }

    #[test]
    fn eval_examples() {
        let p = ComplexPoly::from_real(&[-1.0, 0.0, 1.0]);
        assert_eq!(p.eval(c(1.0, 0.0)), c(0.0, 0.0));
        assert_eq!(p.eval(c(3.0, 0.0)), c(8.0, 0.0));
        let cube = p.pow(3).unwrap();
        // (z^2 - 1) at 2i is -5; cube by repeated squaring of the value.
        let v = p.eval(c(0.0, 2.0));
        let oracle = v * v * v;
        assert!((cube.eval(c(0.0, 2.0)) - oracle).norm() < 1e-12);
        assert!((oracle - c(-125.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn compose_examples() {
        let outer = ComplexPoly::from_real(&[-2.0, 0.0, 1.0]);
        let inner = ComplexPoly::from_real(&[-3.0, 0.0, 1.0]);
        let got = ComplexPoly::compose(&outer, &inner).unwrap();
        assert_eq!(got, ComplexPoly::from_real(&[7.0, 0.0, -6.0, 0.0, 1.0]));
        assert!(got.is_monic());

        assert_eq!(ComplexPoly::compose(&ComplexPoly::x(), &inner).unwrap(), inner);

        let cube = ComplexPoly::from_real(&[0.0, 0.0, 0.0, 1.0]);
        let base = ComplexPoly::from_real(&[-1.0, 0.0, 1.0]);
        assert_eq!(ComplexPoly::compose(&cube, &base).unwrap(), base.pow(3).unwrap());
    }

    #[test]
    fn compose_respects_degree_cap() {
        let p = ComplexPoly::x().pow(30).unwrap();
        let err = ComplexPoly::compose(&p, &p).unwrap_err();
        assert!(matches!(err, Error::DegreeOverflow { degree: 900, .. }));
    }

    #[test]
    fn roots_of_unity() {
        let p = ComplexPoly::from_real(&[-1.0, 0.0, 0.0, 0.0, 0.0, 1.0]);
        let rs = p.roots(&RootConfig::default()).unwrap();
        assert_eq!(rs.roots.len(), 5);
        for r in &rs.roots {
            assert_eq!(r.multiplicity, 1);
            assert!((r.value.norm() - 1.0).abs() < 1e-13);
            assert!((r.value.powu(5) - 1.0).norm() < 1e-12);
        }
    }

    #[test]
    fn triple_roots_are_clustered() {
        let p = ComplexPoly::from_real(&[-1.0, 0.0, 1.0]).pow(3).unwrap();
        let rs = p.roots(&RootConfig::default()).unwrap();
        assert_eq!(rs.roots.len(), 2);
        for r in &rs.roots {
            assert_eq!(r.multiplicity, 3);
            assert!((r.value.re.abs() - 1.0).abs() < 1e-10, "{:?}", r.value);
            assert!(r.value.im.abs() < 1e-10);
        }
    }

    #[test]
    fn high_multiplicity_bernoulli_powers() {
        for j in 1..=10 {
            let p = ComplexPoly::from_real(&[-1.0, 0.0, 1.0]).pow(j).unwrap();
            let rs = p.roots(&RootConfig::default()).unwrap();
            assert_eq!(rs.roots.len(), 2, "j = {j}: {:?}", rs.roots);
            assert!(rs.roots.iter().all(|r| r.multiplicity == j));
            for r in &rs.roots {
                assert!((r.value.re.abs() - 1.0).abs() < 1e-9, "j = {j}: {:?}", r.value);
            }
        }
    }

    #[test]
    fn monomial_roots_are_exact_zero() {
        let p = ComplexPoly::x().pow(7).unwrap();
        let rs = p.roots(&RootConfig::default()).unwrap();
        assert_eq!(rs.roots.len(), 1);
        assert_eq!(rs.roots[0].multiplicity, 7);
        assert_eq!(rs.roots[0].value, c(0.0, 0.0));
    }

    #[test]
    fn random_degree_twelve_residuals() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(12);
        for _ in 0..20 {
            let mut coeffs: Vec<Complex64> = (0..12)
                .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            coeffs.push(c(1.0, 0.0));
            let p = ComplexPoly::new(coeffs);
            let rs = p.roots(&RootConfig::default()).unwrap();
            assert_eq!(rs.total_multiplicity(), 12);
            for r in &rs.roots {
                assert!(r.residual <= 1e-10 * p.scale(), "residual {}", r.residual);
            }
        }
    }

    #[test]
    fn roots_reject_constants() {
        assert!(ComplexPoly::one().roots(&RootConfig::default()).is_err());
    }

    #[test]
    fn serde_round_trip_pairs() {
        let p = ComplexPoly::new(vec![c(-1.0, 0.5), c(0.0, 0.0), c(1.0, 0.0)]);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, "[[-1.0,0.5],[0.0,0.0],[1.0,0.0]]");
        let back: ComplexPoly = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
    }
}
