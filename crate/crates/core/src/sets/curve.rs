//! Parameterized outer boundaries. Every boundary is a finite union of
//! components, each a map `u in [0,1] -> finitely many points` (several
//! branches for polynomial preimages), together with `dz/du` so arc-length
//! weights come out exactly.

use std::f64::consts::{PI, TAU};
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use super::{koch, BoundarySample, ParamTag, SetSpec};
use crate::error::{Error, Result};
use crate::poly::{ComplexPoly, RootConfig};
use crate::potential::GreenModel;

/// Inverse of the Joukowski map `w -> w + 1/w`, the branch with `|z(x)| >= 1`
/// and `z(x)/x -> 1` at infinity. Branch cut on `[-2, 2]`.
pub fn joukowski_inverse(x: Complex64) -> Complex64 {
    let s = (x - 2.0).sqrt() * (x + 2.0).sqrt();
    let w = (x + s) * 0.5;
    if w.norm() < 1.0 {
        1.0 / w
    } else {
        w
    }
}

#[derive(Clone)]
pub(crate) enum Curve {
    Circle {
        center: Complex64,
        radius: f64,
    },
    /// `center + rho (w + 1/w)`, `w = r e^{2 pi i u}`.
    Joukowski {
        center: Complex64,
        rho: f64,
        r: f64,
    },
    /// Chebyshev–Lobatto parameterization of `[a, b]`; not periodic.
    Segment {
        a: f64,
        b: f64,
    },
    /// All solutions of `P(z) = x` for `x` on the inner curve.
    Preimage {
        p: ComplexPoly,
        inner: Box<Curve>,
    },
    /// Closed polygon, arc-length parameter.
    Polyline {
        vertices: Vec<Complex64>,
        cum: Vec<f64>,
        total: f64,
    },
    /// Circle of radius `radius` followed by the segment `[radius, end]`
    /// traversed out and back.
    CircleSpike {
        radius: f64,
        end: f64,
    },
    /// Outermost crossing of `G = alpha` along rays from `center`.
    Ray {
        model: Arc<GreenModel>,
        center: Complex64,
        alpha: f64,
        r_max: f64,
    },
}

fn cheb_root_cfg() -> RootConfig {
    RootConfig::default()
}

impl Curve {
    fn periodic(&self) -> bool {
        match self {
            Curve::Segment { .. } => false,
            Curve::Preimage { inner, .. } => inner.periodic(),
            _ => true,
        }
    }

    fn branches(&self) -> usize {
        match self {
            Curve::Preimage { p, inner } => p.degree().unwrap_or(1) * inner.branches(),
            _ => 1,
        }
    }

    fn length_hint(&self) -> f64 {
        match self {
            Curve::Segment { a, b } => b - a,
            _ => 1.0,
        }
    }

    /// Weight multiplier at parameter `u` (the doubled spike carries half
    /// weight per side).
    fn multiplier(&self, u: f64) -> f64 {
        match self {
            Curve::CircleSpike { radius, end } => {
                let total = TAU * radius + 2.0 * (end - radius);
                if u * total >= TAU * radius {
                    0.5
                } else {
                    1.0
                }
            }
            _ => 1.0,
        }
    }

    /// Boundary points at parameter `u` with their derivatives `dz/du`.
    fn eval(&self, u: f64) -> Result<Vec<(Complex64, Complex64)>> {
        Ok(match self {
            Curve::Circle { center, radius } => {
                let e = Complex64::from_polar(1.0, TAU * u);
                vec![(center + e * radius, Complex64::i() * TAU * radius * e)]
            }
            Curve::Joukowski { center, rho, r } => {
                let w = Complex64::from_polar(*r, TAU * u);
                let wi = 1.0 / w;
                vec![(center + (w + wi) * rho, Complex64::i() * TAU * rho * (w - wi))]
            }
            Curve::Segment { a, b } => {
                let c = 0.5 * (a + b);
                let h = 0.5 * (b - a);
                let x = c - h * (PI * u).cos();
                let x = if u <= 0.0 {
                    *a
                } else if u >= 1.0 {
                    *b
                } else {
                    x
                };
                vec![(Complex64::new(x, 0.0), Complex64::new(h * PI * (PI * u).sin(), 0.0))]
            }
            Curve::Preimage { p, inner } => {
                let dp = p.derivative();
                let mut out = Vec::new();
                for (x, dx) in inner.eval(u)? {
                    let mut q = p.clone();
                    let mut c = q.coeffs().to_vec();
                    c[0] -= x;
                    q = ComplexPoly::new(c);
                    let roots = q.roots(&cheb_root_cfg())?;
                    for z in roots.expanded() {
                        let d = dp.eval(z);
                        let d = if d.norm() < 1e-12 { Complex64::new(1e-12, 0.0) } else { d };
                        out.push((z, dx / d));
                    }
                }
                out
            }
            Curve::Polyline { vertices, cum, total } => {
                let t = (u.rem_euclid(1.0)) * total;
                let n = vertices.len();
                let s = match cum.binary_search_by(|c| c.partial_cmp(&t).unwrap()) {
                    Ok(i) => i.min(n - 1),
                    Err(i) => (i - 1).min(n - 1),
                };
                let a = vertices[s];
                let b = vertices[(s + 1) % n];
                let len = cum[s + 1] - cum[s];
                let dir = (b - a) / len;
                vec![(a + dir * (t - cum[s]), dir * *total)]
            }
            Curve::CircleSpike { radius, end } => {
                let seg = end - radius;
                let total = TAU * radius + 2.0 * seg;
                let t = u.rem_euclid(1.0) * total;
                let circ = TAU * radius;
                if t < circ {
                    let e = Complex64::from_polar(1.0, t / radius);
                    vec![(e * radius, Complex64::i() * e * total)]
                } else if t < circ + seg {
                    vec![(Complex64::new(radius + (t - circ), 0.0), Complex64::new(total, 0.0))]
                } else {
                    vec![(
                        Complex64::new(end - (t - circ - seg), 0.0),
                        Complex64::new(-total, 0.0),
                    )]
                }
            }
            Curve::Ray {
                model,
                center,
                alpha,
                r_max,
            } => {
                let theta = TAU * u;
                let dir = Complex64::from_polar(1.0, theta);
                let g = |r: f64| model.green(center + dir * r);
                let mut hi = *r_max;
                let mut tries = 0;
                while g(hi) <= *alpha {
                    hi *= 2.0;
                    tries += 1;
                    if tries > 60 {
                        return Err(Error::Bracket(format!("no crossing of G = {alpha} along ray {theta}")));
                    }
                }
                // March inward to the outermost crossing, then bisect.
                let steps = 256;
                let dr = hi / steps as f64;
                let mut lo = None;
                for k in 1..=steps {
                    let r = hi - dr * k as f64;
                    if g(r) <= *alpha {
                        lo = Some(r);
                        break;
                    }
                }
                let mut lo = lo.ok_or_else(|| Error::Bracket(format!("G stays above {alpha} along ray {theta}")))?;
                let mut hi = lo + dr;
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if g(mid) <= *alpha {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                    if hi - lo <= 1e-15 * hi {
                        break;
                    }
                }
                let r = 0.5 * (lo + hi);
                let z = center + dir * r;
                let h = 1e-6 * r.max(1e-3);
                let gx = (model.green(z + h) - model.green(z - h)) / (2.0 * h);
                let gy = (model.green(z + Complex64::new(0.0, h)) - model.green(z - Complex64::new(0.0, h))) / (2.0 * h);
                let grad = Complex64::new(gx, gy);
                let g_r = (grad * dir.conj()).re;
                let g_t = (grad * (Complex64::i() * dir).conj()).re * r;
                let r_prime = if g_r.abs() > 1e-300 { -g_t / g_r } else { 0.0 };
                vec![(z, (Complex64::new(r_prime, r)) * dir * TAU)]
            }
        })
    }

    /// Initial parameters and their cell sizes for `k` parameter values.
    fn initial_params(&self, k: usize) -> Vec<(f64, f64)> {
        match self {
            Curve::Segment { .. } => {
                let k = k.max(2);
                let h = 1.0 / (k - 1) as f64;
                (0..k)
                    .map(|i| {
                        let cell = if i == 0 || i == k - 1 { 0.5 * h } else { h };
                        (i as f64 * h, cell)
                    })
                    .collect()
            }
            Curve::Preimage { inner, .. } => inner.initial_params(k),
            Curve::Polyline { cum, total, .. } => piecewise_params(cum, *total, k),
            Curve::CircleSpike { radius, end } => {
                let circ = TAU * radius;
                let seg = end - radius;
                piecewise_params(&[0.0, circ, circ + seg, circ + 2.0 * seg], circ + 2.0 * seg, k)
            }
            _ => {
                let h = 1.0 / k as f64;
                (0..k).map(|i| (i as f64 * h, h)).collect()
            }
        }
    }
}

/// Uniform parameters on each piece `[cum[s], cum[s+1]]` of an arc-length
/// parameterization, apportioned by length, so every breakpoint (corner,
/// spike tip, junction) is a sample point.
fn piecewise_params(cum: &[f64], total: f64, k: usize) -> Vec<(f64, f64)> {
    let n = cum.len() - 1;
    let k = k.max(n);
    let lens: Vec<f64> = (0..n).map(|s| cum[s + 1] - cum[s]).collect();
    let counts = apportion(&lens, k);
    let mut out = Vec::with_capacity(k);
    for s in 0..n {
        let cs = counts[s];
        let step = lens[s] / cs as f64;
        for j in 0..cs {
            out.push(((cum[s] + j as f64 * step) / total, step / total));
        }
    }
    out
}

/// Splits `total` into integer parts proportional to `shares`, each at least
/// one, by largest remainder.
fn apportion(shares: &[f64], total: usize) -> Vec<usize> {
    let n = shares.len();
    let sum: f64 = shares.iter().sum();
    let extra = total.saturating_sub(n);
    let raw: Vec<f64> = shares.iter().map(|s| extra as f64 * s / sum).collect();
    let mut counts: Vec<usize> = raw.iter().map(|r| 1 + r.floor() as usize).collect();
    let mut rem: Vec<(usize, f64)> = raw.iter().enumerate().map(|(i, r)| (i, r - r.floor())).collect();
    rem.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
    let assigned: usize = counts.iter().sum();
    for &(i, _) in rem.iter().take(total.saturating_sub(assigned)) {
        counts[i] += 1;
    }
    counts
}

fn polyline(vertices: &[Complex64]) -> Curve {
    let mut v = vertices.to_vec();
    if super::polygon_signed_area(&v) < 0.0 {
        v.reverse();
    }
    let n = v.len();
    let mut cum = Vec::with_capacity(n + 1);
    cum.push(0.0);
    for i in 0..n {
        let l = (v[(i + 1) % n] - v[i]).norm();
        cum.push(cum[i] + l);
    }
    let total = cum[n];
    Curve::Polyline {
        vertices: v,
        cum,
        total,
    }
}

pub(crate) struct Parameterization {
    comps: Vec<Curve>,
}

fn level_curve(base: &SetSpec, alpha: f64) -> Result<Curve> {
    Ok(match base {
        SetSpec::Interval { a, b } => Curve::Joukowski {
            center: Complex64::new(0.5 * (a + b), 0.0),
            rho: 0.25 * (b - a),
            r: alpha.exp(),
        },
        SetSpec::RealIntervalUnion { intervals } if intervals.len() == 1 => Curve::Joukowski {
            center: Complex64::new(0.5 * (intervals[0][0] + intervals[0][1]), 0.0),
            rho: 0.25 * (intervals[0][1] - intervals[0][0]),
            r: alpha.exp(),
        },
        SetSpec::Disk { center, radius } => Curve::Circle {
            center: *center,
            radius: radius * alpha.exp(),
        },
        SetSpec::ConfocalEllipse { alpha: a0 } => Curve::Joukowski {
            center: Complex64::new(0.0, 0.0),
            rho: 1.0,
            r: (a0 + alpha).exp(),
        },
        SetSpec::Lemniscate { p, alpha: a0 } => {
            let d = p.degree().unwrap_or(1) as f64;
            Curve::Preimage {
                p: p.clone(),
                inner: Box::new(Curve::Circle {
                    center: Complex64::new(0.0, 0.0),
                    radius: a0 * (d * alpha).exp(),
                }),
            }
        }
        SetSpec::PolynomialPreimage { p } => {
            let d = p.degree().unwrap_or(1) as f64;
            Curve::Preimage {
                p: p.clone(),
                inner: Box::new(Curve::Joukowski {
                    center: Complex64::new(0.0, 0.0),
                    rho: 1.0,
                    r: (d * alpha).exp(),
                }),
            }
        }
        SetSpec::LevelSet { base, alpha: a0 } => level_curve(base, a0 + alpha)?,
        other => {
            let model = GreenModel::for_spec(other)?;
            let hull = model.hull().clone();
            let center = hull.center();
            let r_max = 2.0 * hull.diameter().max(1e-6) + alpha.exp() * model.capacity * 2.0;
            Curve::Ray {
                model: Arc::new(model),
                center,
                alpha,
                r_max,
            }
        }
    })
}

impl Parameterization {
    pub(crate) fn for_spec(spec: &SetSpec) -> Result<Self> {
        let comps = match spec {
            SetSpec::Interval { a, b } => vec![Curve::Segment { a: *a, b: *b }],
            SetSpec::RealIntervalUnion { intervals } => intervals
                .iter()
                .map(|iv| Curve::Segment { a: iv[0], b: iv[1] })
                .collect(),
            SetSpec::Disk { center, radius } => vec![Curve::Circle {
                center: *center,
                radius: *radius,
            }],
            SetSpec::ConfocalEllipse { alpha } => vec![Curve::Joukowski {
                center: Complex64::new(0.0, 0.0),
                rho: 1.0,
                r: alpha.exp(),
            }],
            SetSpec::Lemniscate { p, alpha } => vec![Curve::Preimage {
                p: p.clone(),
                inner: Box::new(Curve::Circle {
                    center: Complex64::new(0.0, 0.0),
                    radius: *alpha,
                }),
            }],
            SetSpec::PolynomialPreimage { p } => vec![Curve::Preimage {
                p: p.clone(),
                inner: Box::new(Curve::Segment { a: -2.0, b: 2.0 }),
            }],
            SetSpec::LevelSet { base, alpha } => vec![level_curve(base, *alpha)?],
            SetSpec::Polygon { vertices } => vec![polyline(vertices)],
            SetSpec::KochAntenna { .. } => vec![polyline(&koch::vertices_for(spec)?)],
            SetSpec::DiskPlusSpike { radius, spike_end } => vec![Curve::CircleSpike {
                radius: *radius,
                end: *spike_end,
            }],
            SetSpec::JuliaCauliflower { .. } => {
                return Err(Error::Unsupported("Julia sets are sampled by inverse iteration".into()))
            }
        };
        Ok(Parameterization { comps })
    }

    fn eval_many(&self, params: &[(u32, f64)]) -> Result<Vec<Vec<(Complex64, Complex64)>>> {
        params
            .par_iter()
            .map(|&(c, u)| self.comps[c as usize].eval(u))
            .collect()
    }

    pub(crate) fn sample(&self, m: usize) -> Result<BoundarySample> {
        let lens: Vec<f64> = self.comps.iter().map(|c| c.length_hint()).collect();
        let shares = if self.comps.len() == 1 {
            vec![m]
        } else {
            apportion(&lens, m)
        };
        let mut params: Vec<(u32, f64, f64)> = Vec::new();
        for (ci, comp) in self.comps.iter().enumerate() {
            let k = shares[ci].div_ceil(comp.branches()).max(2);
            for (u, cell) in comp.initial_params(k) {
                params.push((ci as u32, u, cell));
            }
        }
        let evals = self.eval_many(&params.iter().map(|&(c, u, _)| (c, u)).collect::<Vec<_>>())?;
        let mut s = BoundarySample {
            points: Vec::new(),
            weights: Vec::new(),
            param_weights: Vec::new(),
            generation: 0,
            tags: Vec::new(),
            julia_depth: 0,
        };
        for (&(c, u, cell), pts) in params.iter().zip(evals) {
            let comp = &self.comps[c as usize];
            let mult = comp.multiplier(u);
            let pw = cell * lens[c as usize] * mult / comp.branches() as f64;
            for (z, dz) in pts {
                s.points.push(z);
                s.weights.push(dz.norm() * cell * mult);
                s.param_weights.push(pw);
                s.tags.push(ParamTag { comp: c, u });
            }
        }
        finish_weights(&mut s);
        Ok(s)
    }

    pub(crate) fn refine(
        &self,
        sample: &BoundarySample,
        p: &ComplexPoly,
        threshold: f64,
    ) -> Result<(BoundarySample, usize)> {
        let vals: Vec<f64> = sample.points.par_iter().map(|&z| p.eval(z).norm()).collect();
        let current = vals.iter().cloned().fold(0.0, f64::max);
        let lens: Vec<f64> = self.comps.iter().map(|c| c.length_hint()).collect();

        let mut candidates: Vec<(u32, f64, f64)> = Vec::new();
        for (ci, comp) in self.comps.iter().enumerate() {
            // f(u) = max over branches at each distinct parameter.
            let mut us: Vec<(f64, f64)> = sample
                .tags
                .iter()
                .zip(&vals)
                .filter(|(t, _)| t.comp as usize == ci)
                .map(|(t, &v)| (t.u, v))
                .collect();
            us.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
            let mut f: Vec<(f64, f64)> = Vec::with_capacity(us.len());
            for (u, v) in us {
                match f.last_mut() {
                    Some(last) if (last.0 - u).abs() <= 1e-15 => last.1 = last.1.max(v),
                    _ => f.push((u, v)),
                }
            }
            let k = f.len();
            if k < 2 {
                continue;
            }
            let periodic = comp.periodic();
            for i in 0..k {
                if f[i].1 < 0.75 * current {
                    continue;
                }
                let (prev, next) = if periodic {
                    (Some((i + k - 1) % k), Some((i + 1) % k))
                } else {
                    (i.checked_sub(1), if i + 1 < k { Some(i + 1) } else { None })
                };
                let left_ok = prev.map(|j| f[j].1 <= f[i].1).unwrap_or(true);
                let right_ok = next.map(|j| f[j].1 <= f[i].1).unwrap_or(true);
                if !(left_ok && right_ok) {
                    continue;
                }
                for (nb, sign) in [(prev, -1.0), (next, 1.0)] {
                    let Some(j) = nb else { continue };
                    let mut h = (f[j].0 - f[i].0).abs();
                    if periodic && h > 0.5 {
                        h = 1.0 - h;
                    }
                    let step = h / 4.0;
                    for q in 1..4 {
                        let mut u = f[i].0 + sign * step * q as f64;
                        if periodic {
                            u = u.rem_euclid(1.0);
                        } else if !(0.0..=1.0).contains(&u) {
                            continue;
                        }
                        candidates.push((ci as u32, u, step));
                    }
                }
            }
        }
        // Sharp peaks can fall between the quarter steps; add their polished
        // locations too.
        let (_, polished) = self.polished_maxima(sample, p, 0.75);
        candidates.extend(
            polished
                .into_iter()
                .filter(|m| m.value > threshold)
                .map(|m| (m.comp, m.u, m.cell)),
        );
        candidates.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.partial_cmp(&b.1).unwrap()));
        candidates.dedup_by(|a, b| a.0 == b.0 && (a.1 - b.1).abs() <= 1e-15);

        let evals = self.eval_many(&candidates.iter().map(|&(c, u, _)| (c, u)).collect::<Vec<_>>())?;
        let mut out = sample.clone();
        out.generation += 1;
        let mut inserted = 0;
        for (&(c, u, cell), pts) in candidates.iter().zip(evals) {
            let comp = &self.comps[c as usize];
            let mult = comp.multiplier(u);
            let pw = cell * lens[c as usize] * mult / comp.branches() as f64;
            for (z, dz) in pts {
                if p.eval(z).norm() > threshold {
                    out.points.push(z);
                    out.weights.push(dz.norm() * cell * mult);
                    out.param_weights.push(pw);
                    out.tags.push(ParamTag { comp: c, u });
                    inserted += 1;
                }
            }
        }
        finish_weights(&mut out);
        Ok((out, inserted))
    }
}

impl Parameterization {
    /// Local maxima of `f(u) = max_branch |p|` along each component with
    /// `f >= band * max f`, polished by golden section in `u`. Plateau points
    /// are returned unpolished.
    pub(crate) fn maxima(&self, sample: &BoundarySample, p: &ComplexPoly, band: f64) -> Result<Vec<(Complex64, f64)>> {
        let (mut out, polished) = self.polished_maxima(sample, p, band);
        for m in polished {
            // Other branches over the same parameter can tie (symmetric
            // preimages); keep them all.
            let comp = &self.comps[m.comp as usize];
            let mut tied = false;
            if comp.branches() > 1 {
                if let Ok(pts) = comp.eval(m.u) {
                    for (z, _) in pts {
                        let v = p.eval(z).norm();
                        if v >= (1.0 - 1e-9) * m.value {
                            out.push((z, v));
                            tied = true;
                        }
                    }
                }
            }
            if !tied {
                out.push((m.z, m.value));
            }
        }
        Ok(out)
    }

    /// Plateau points, and golden-section maxima with their parameters.
    fn polished_maxima(
        &self,
        sample: &BoundarySample,
        p: &ComplexPoly,
        band: f64,
    ) -> (Vec<(Complex64, f64)>, Vec<PolishedMax>) {
        let vals: Vec<f64> = sample.points.par_iter().map(|&z| p.eval(z).norm()).collect();
        let current = vals.iter().cloned().fold(0.0, f64::max);
        let mut jobs: Vec<(u32, f64, f64, f64, Complex64, f64)> = Vec::new();
        let mut plateau: Vec<(Complex64, f64)> = Vec::new();
        for ci in 0..self.comps.len() {
            let mut us: Vec<(f64, f64, Complex64)> = sample
                .tags
                .iter()
                .zip(&vals)
                .zip(&sample.points)
                .filter(|((t, _), _)| t.comp as usize == ci)
                .map(|((t, &v), &z)| (t.u, v, z))
                .collect();
            us.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
            let mut f: Vec<(f64, f64, Complex64)> = Vec::with_capacity(us.len());
            for (u, v, z) in us {
                match f.last_mut() {
                    Some(last) if (last.0 - u).abs() <= 1e-15 => {
                        if v > last.1 {
                            last.1 = v;
                            last.2 = z;
                        }
                    }
                    _ => f.push((u, v, z)),
                }
            }
            let k = f.len();
            if k < 3 {
                continue;
            }
            let periodic = self.comps[ci].periodic();
            for i in 0..k {
                if f[i].1 < band * current {
                    continue;
                }
                let prev = if periodic { Some((i + k - 1) % k) } else { i.checked_sub(1) };
                let next = if periodic { Some((i + 1) % k) } else if i + 1 < k { Some(i + 1) } else { None };
                let lv = prev.map(|j| f[j].1).unwrap_or(f64::NEG_INFINITY);
                let rv = next.map(|j| f[j].1).unwrap_or(f64::NEG_INFINITY);
                if lv > f[i].1 || rv > f[i].1 {
                    continue;
                }
                let flat = 1e-13 * f[i].1;
                if (lv - f[i].1).abs() <= flat && (rv - f[i].1).abs() <= flat {
                    plateau.push((f[i].2, f[i].1));
                    continue;
                }
                let unwrap = |j: usize, side: f64| {
                    let mut u = f[j].0;
                    if periodic && side < 0.0 && u > f[i].0 {
                        u -= 1.0;
                    }
                    if periodic && side > 0.0 && u < f[i].0 {
                        u += 1.0;
                    }
                    u
                };
                let lo = prev.map(|j| unwrap(j, -1.0)).unwrap_or(f[i].0);
                let hi = next.map(|j| unwrap(j, 1.0)).unwrap_or(f[i].0);
                jobs.push((ci as u32, lo, hi, f[i].0, f[i].2, f[i].1));
            }
        }
        let polished: Vec<PolishedMax> = jobs
            .par_iter()
            .map(|&(c, lo, hi, u0, z0, v0)| {
                let comp = &self.comps[c as usize];
                let wrap = |u: f64| if comp.periodic() { u.rem_euclid(1.0) } else { u.clamp(0.0, 1.0) };
                let eval = |u: f64| -> (Complex64, f64, f64) {
                    match comp.eval(wrap(u)) {
                        Ok(pts) => pts
                            .into_iter()
                            .map(|(z, _)| (z, p.eval(z).norm(), u))
                            .fold((z0, f64::NEG_INFINITY, u), |a, b| if b.1 > a.1 { b } else { a }),
                        Err(_) => (z0, f64::NEG_INFINITY, u),
                    }
                };
                let mut best = (z0, v0, u0);
                let (mut a, mut b) = (lo, hi);
                let r = (5f64.sqrt() - 1.0) / 2.0;
                let mut x1 = b - r * (b - a);
                let mut x2 = a + r * (b - a);
                let mut f1 = eval(x1);
                let mut f2 = eval(x2);
                for _ in 0..60 {
                    if f1.1 > best.1 {
                        best = f1;
                    }
                    if f2.1 > best.1 {
                        best = f2;
                    }
                    if (b - a).abs() <= 1e-15 * (1.0 + u0.abs()) {
                        break;
                    }
                    if f1.1 >= f2.1 {
                        b = x2;
                        x2 = x1;
                        f2 = f1;
                        x1 = b - r * (b - a);
                        f1 = eval(x1);
                    } else {
                        a = x1;
                        x1 = x2;
                        f1 = f2;
                        x2 = a + r * (b - a);
                        f2 = eval(x2);
                    }
                }
                PolishedMax {
                    comp: c,
                    u: wrap(best.2),
                    cell: 0.25 * (hi - lo),
                    z: best.0,
                    value: best.1,
                }
            })
            .collect();
        (plateau, polished)
    }
}

struct PolishedMax {
    comp: u32,
    u: f64,
    /// Parameter cell assigned if the point is inserted.
    cell: f64,
    z: Complex64,
    value: f64,
}

/// Floors vanishing arc-length weights (Lobatto endpoints, critical points)
/// and normalizes the parameter weights to unit mass.
fn finish_weights(s: &mut BoundarySample) {
    let n = s.weights.len().max(1) as f64;
    let mean = s.weights.iter().sum::<f64>() / n;
    let floor = 1e-3 * mean.max(f64::MIN_POSITIVE);
    for w in &mut s.weights {
        if !(*w > floor) {
            *w = floor;
        }
    }
    let total: f64 = s.param_weights.iter().sum();
    if total > 0.0 {
        for w in &mut s.param_weights {
            *w /= total;
        }
    }
}
