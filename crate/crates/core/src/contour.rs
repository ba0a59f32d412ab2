//! Argument-principle zero counting on circles and rectangles, and a strip
//! collector that isolates every zero of an entire function in
//! `[-R, R] x [-H, H]`.

use std::f64::consts::FRAC_PI_4;

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::roots::find_roots;
use crate::scalar::{cplx, is_finite_c, ratio, real, Real};

pub const MAX_CONTOUR_SAMPLES: usize = 1 << 20;
/// Relative radius change applied when a zero sits on the contour.
pub const RADIUS_JITTER: f64 = 0.013;
/// A zero closer than this fraction of the radius counts as on the contour.
pub const NEAR_ZERO_FRACTION: f64 = 1e-4;
const JITTER_STEPS: [f64; 5] = [1.0, -1.0, 2.0, -2.0, 3.0];
const WINDING_TOL: f64 = 1e-3;
const EDGE_SPACING: f64 = 0.125;
const MAX_EDGE_SAMPLES: usize = 1 << 18;
const SPLIT_FRACTIONS: [f64; 5] = [0.5, 0.431, 0.569, 0.377, 0.623];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZeroCount<T> {
    pub radius: T,
    pub count: usize,
    pub contour_samples: usize,
    /// Winding number before rounding.
    pub winding: T,
}

enum Trace<T> {
    Resolved { phase: T, samples: usize },
    Near,
}

/// Distance from the contour to any zero lying close to one of its samples.
///
/// Candidates are samples where `|f|` has a local minimum and the first-order
/// estimate `|f| / |f'|` is within one sample spacing; a few Newton steps
/// from there locate the zero, whose distance to the path is returned.
fn near_zero_distance<T, F, D>(f: &F, z: &[Complex<T>], v: &[Complex<T>], closed: bool, dist: &D) -> T
where
    T: Real,
    F: Fn(Complex<T>) -> Complex<T> + Sync,
    D: Fn(Complex<T>) -> T,
{
    let m = z.len();
    let mut best = T::infinity();
    for j in 0..m {
        let (lo, hi) = if closed {
            ((j + m - 1) % m, (j + 1) % m)
        } else {
            (j.saturating_sub(1), (j + 1).min(m - 1))
        };
        let a = v[j].norm();
        if a > v[lo].norm() || a > v[hi].norm() {
            continue;
        }
        let dv = (v[hi] - v[lo]).norm();
        let spacing = (z[hi] - z[lo]).norm();
        if dv == T::zero() || a * spacing / dv > spacing {
            continue;
        }
        let mut w = z[j];
        for _ in 0..3 {
            let fw = f(w);
            let h = T::lit(1e-7) * w.norm().max(T::one());
            let d = (f(w + real(h)) - f(w - real(h))) / (h + h);
            if fw.norm() == T::zero() || d.norm() == T::zero() || !is_finite_c(d) {
                break;
            }
            w = w - ratio(fw, d);
            if (w - z[j]).norm() > spacing * T::lit(4.0) {
                break;
            }
        }
        if (w - z[j]).norm() <= spacing {
            best = best.min(dist(w));
        }
    }
    best
}

/// Unwraps the phase of `f` along a sampled path, doubling the sample count
/// until every step is below pi/4.
fn trace<T, F, P, D>(f: &F, point: P, dist: D, closed: bool, n0: usize, cap: usize, tol: T) -> Result<Trace<T>>
where
    T: Real,
    F: Fn(Complex<T>) -> Complex<T> + Sync,
    P: Fn(usize, usize) -> Complex<T> + Sync,
    D: Fn(Complex<T>) -> T,
{
    let len = |n: usize| if closed { n } else { n + 1 };
    let mut n = n0.max(4);
    let mut z: Vec<Complex<T>> = (0..len(n)).map(|j| point(j, n)).collect();
    let mut v: Vec<Complex<T>> = z.par_iter().map(|&p| f(p)).collect();
    let limit = T::lit(FRAC_PI_4);
    loop {
        if let Some(bad) = v.iter().position(|w| !is_finite_c(*w)) {
            return Err(Error::NonFinite {
                context: format!("contour sample at {}", z[bad]),
            });
        }
        let m = v.len();
        let steps = if closed { m } else { m - 1 };
        let mut total = T::zero();
        let mut max_step = T::zero();
        for j in 0..steps {
            let (a, b) = (v[j], v[(j + 1) % m]);
            if a.norm() == T::zero() || b.norm() == T::zero() {
                return Ok(Trace::Near);
            }
            let d = ratio(b, a).arg();
            total = total + d;
            max_step = max_step.max(d.abs());
        }
        if near_zero_distance(f, &z, &v, closed, &dist) < tol {
            return Ok(Trace::Near);
        }
        if max_step < limit {
            return Ok(Trace::Resolved { phase: total, samples: m });
        }
        if n >= cap {
            return Err(Error::Sampling { samples: m });
        }
        let fresh: Vec<Complex<T>> = (0..n).map(|j| point(2 * j + 1, 2 * n)).collect();
        let fv: Vec<Complex<T>> = fresh.par_iter().map(|&p| f(p)).collect();
        let mut z2 = Vec::with_capacity(len(2 * n));
        let mut v2 = Vec::with_capacity(len(2 * n));
        for j in 0..n {
            z2.push(z[j]);
            v2.push(v[j]);
            z2.push(fresh[j]);
            v2.push(fv[j]);
        }
        if !closed {
            z2.push(z[n]);
            v2.push(v[n]);
        }
        z = z2;
        v = v2;
        n *= 2;
    }
}

fn rounded_count<T: Real>(phase: T) -> Result<(usize, T)> {
    let w = phase / T::TAU();
    let r = w.round();
    if (w - r).abs() > T::lit(WINDING_TOL) || r < T::zero() {
        return Err(Error::Sampling { samples: 0 });
    }
    Ok((r.to_usize().unwrap_or(0), w))
}

/// Winding count on `|rho - center| = radius`, or `None` when a zero lies
/// on the contour.
pub fn count_zeros_circle<T, F>(f: &F, center: Complex<T>, radius: T, samples: usize) -> Result<Option<ZeroCount<T>>>
where
    T: Real,
    F: Fn(Complex<T>) -> Complex<T> + Sync,
{
    let point = |j: usize, n: usize| {
        let theta = T::TAU() * T::from_count(j) / T::from_count(n);
        center + cplx(theta.cos(), theta.sin()) * radius
    };
    let tol = T::lit(NEAR_ZERO_FRACTION) * radius;
    let dist = |w: Complex<T>| ((w - center).norm() - radius).abs();
    match trace(f, point, dist, true, samples, MAX_CONTOUR_SAMPLES, tol)? {
        Trace::Near => Ok(None),
        Trace::Resolved { phase, samples } => {
            let (count, winding) = rounded_count(phase).map_err(|_| Error::Sampling { samples })?;
            Ok(Some(ZeroCount {
                radius,
                count,
                contour_samples: samples,
                winding,
            }))
        }
    }
}

/// Number of zeros of `f` in `|rho| < radius`, with multiplicity.
///
/// A zero on the contour moves the radius by `radius * 0.013 * s` for
/// `s = 1, -1, 2, -2, 3` before giving up.
pub fn count_zeros_disk<T, F>(f: &F, radius: T, samples: usize) -> Result<ZeroCount<T>>
where
    T: Real,
    F: Fn(Complex<T>) -> Complex<T> + Sync,
{
    if !(radius > T::zero()) || !radius.is_finite() {
        return Err(Error::invalid("radius", "must be positive and finite"));
    }
    if samples == 0 {
        return Err(Error::invalid("samples", "must be positive"));
    }
    let origin = Complex::new(T::zero(), T::zero());
    if let Some(c) = count_zeros_circle(f, origin, radius, samples)? {
        return Ok(c);
    }
    for (k, s) in JITTER_STEPS.iter().enumerate() {
        let r = radius * (T::one() + T::lit(RADIUS_JITTER * s));
        if let Some(c) = count_zeros_circle(f, origin, r, samples)? {
            log::debug!("contour moved to r = {} after {} retries", r, k + 1);
            return Ok(c);
        }
    }
    Err(Error::NearContourZero {
        radius: radius.as_f64(),
        distance: NEAR_ZERO_FRACTION * radius.as_f64(),
        retries: JITTER_STEPS.len(),
    })
}

/// Axis-aligned rectangle `[x0, x1] x [y0, y1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect<T> {
    pub x0: T,
    pub x1: T,
    pub y0: T,
    pub y1: T,
}

impl<T: Real> Rect<T> {
    pub fn new(x0: T, x1: T, y0: T, y1: T) -> Self {
        Rect { x0, x1, y0, y1 }
    }

    pub fn width(&self) -> T {
        self.x1 - self.x0
    }

    pub fn height(&self) -> T {
        self.y1 - self.y0
    }

    pub fn center(&self) -> Complex<T> {
        let half = T::lit(0.5);
        cplx((self.x0 + self.x1) * half, (self.y0 + self.y1) * half)
    }

    pub fn contains(&self, z: Complex<T>) -> bool {
        z.re >= self.x0 && z.re <= self.x1 && z.im >= self.y0 && z.im <= self.y1
    }

    /// Splits across the longer side at `frac` of its length.
    fn split(&self, frac: T) -> (Self, Self) {
        if self.width() >= self.height() {
            let x = self.x0 + self.width() * frac;
            (Rect { x1: x, ..*self }, Rect { x0: x, ..*self })
        } else {
            let y = self.y0 + self.height() * frac;
            (Rect { y1: y, ..*self }, Rect { y0: y, ..*self })
        }
    }
}

/// Phase change of `f` along the segment `a -> b`; `None` when a zero is
/// within `tol` of it.
fn segment_phase<T, F>(f: &F, a: Complex<T>, b: Complex<T>, tol: T) -> Result<Option<T>>
where
    T: Real,
    F: Fn(Complex<T>) -> Complex<T> + Sync,
{
    let len = (b - a).norm();
    let n0 = (len / T::lit(EDGE_SPACING)).ceil().to_usize().unwrap_or(8).max(8);
    let point = |j: usize, n: usize| a + (b - a) * (T::from_count(j) / T::from_count(n));
    let dist = |w: Complex<T>| {
        let d = b - a;
        let t = (((w - a) * d.conj()).re / d.norm_sqr()).max(T::zero()).min(T::one());
        (w - (a + d * t)).norm()
    };
    Ok(match trace(f, point, dist, false, n0, MAX_EDGE_SAMPLES, tol)? {
        Trace::Resolved { phase, .. } => Some(phase),
        Trace::Near => None,
    })
}

/// Zeros inside `rect` counted by the argument principle, or `None` when
/// one lies on the boundary.
pub fn count_zeros_rect<T, F>(f: &F, rect: &Rect<T>) -> Result<Option<usize>>
where
    T: Real,
    F: Fn(Complex<T>) -> Complex<T> + Sync,
{
    let tol = T::lit(NEAR_ZERO_FRACTION) * rect.width().min(rect.height());
    let c = [
        cplx(rect.x0, rect.y0),
        cplx(rect.x1, rect.y0),
        cplx(rect.x1, rect.y1),
        cplx(rect.x0, rect.y1),
    ];
    let mut total = T::zero();
    for k in 0..4 {
        match segment_phase(f, c[k], c[(k + 1) % 4], tol)? {
            Some(p) => total = total + p,
            None => return Ok(None),
        }
    }
    rounded_count(total).map(|(n, _)| Some(n))
}

/// Newton iteration with a central-difference derivative.
pub fn newton<T, F>(f: &F, z0: Complex<T>, max_iter: usize) -> Option<Complex<T>>
where
    T: Real,
    F: Fn(Complex<T>) -> Complex<T>,
{
    newton_within(f, z0, max_iter, T::infinity())
}

/// As [`newton`], giving up once an iterate is farther than `reach` from `z0`.
/// Keeps evaluations away from regions where `f` is expensive or overflows.
fn newton_within<T, F>(f: &F, z0: Complex<T>, max_iter: usize, reach: T) -> Option<Complex<T>>
where
    T: Real,
    F: Fn(Complex<T>) -> Complex<T>,
{
    let mut z = z0;
    for _ in 0..max_iter {
        if (z - z0).norm() > reach {
            return None;
        }
        let fz = f(z);
        if fz.norm() == T::zero() {
            return Some(z);
        }
        if !is_finite_c(fz) {
            return None;
        }
        let h = T::lit(1e-6) * z.norm().max(T::one());
        let d = (f(z + real(h)) - f(z - real(h))) / (h + h);
        if d.norm() == T::zero() || !is_finite_c(d) {
            return None;
        }
        let step = ratio(fz, d);
        z = z - step;
        if step.norm() <= T::lit(4e-12) * z.norm().max(T::one()) {
            return Some(z);
        }
    }
    None
}

fn distinct<T: Real>(found: &[Complex<T>], z: Complex<T>) -> bool {
    found
        .iter()
        .all(|w| (*w - z).norm() > T::lit(1e-7) * z.norm().max(T::one()))
}

/// Locates the `n` zeros known to lie in `rect`.
fn isolate<T, F>(f: &F, rect: &Rect<T>, n: usize, depth: usize) -> Result<Vec<Complex<T>>>
where
    T: Real,
    F: Fn(Complex<T>) -> Complex<T> + Sync,
{
    if n == 0 {
        return Ok(Vec::new());
    }
    let c = rect.center();
    let mut starts = vec![c];
    if n > 1 {
        let (qx, qy) = (rect.width() * T::lit(0.25), rect.height() * T::lit(0.25));
        for (sx, sy) in [(-1.0, -1.0), (1.0, -1.0), (1.0, 1.0), (-1.0, 1.0)] {
            starts.push(c + cplx(qx * T::lit(sx), qy * T::lit(sy)));
        }
    }
    let reach = (rect.width() + rect.height()) * T::lit(2.0);
    let mut found = Vec::new();
    for s in starts {
        if let Some(z) = newton_within(f, s, 60, reach) {
            if rect.contains(z) && distinct(&found, z) {
                found.push(z);
                if found.len() == n {
                    return Ok(found);
                }
            }
        }
    }
    let scale = c.norm().max(T::one());
    if found.len() == 1 {
        // multiple zero: all n inside a tiny circle
        let r = T::lit(1e-5) * scale;
        if let Some(zc) = count_zeros_circle(f, found[0], r, 16)? {
            if zc.count == n {
                return Ok(vec![found[0]; n]);
            }
        }
    }
    if depth > 64 || rect.width().max(rect.height()) < T::lit(1e-10) * scale {
        return Err(Error::Bracket(format!(
            "could not isolate {} zeros near {} (found {})",
            n,
            c,
            found.len()
        )));
    }
    for frac in SPLIT_FRACTIONS {
        let (a, b) = rect.split(T::lit(frac));
        if let Some(na) = count_zeros_rect(f, &a)? {
            if na > n {
                continue;
            }
            let mut out = isolate(f, &a, na, depth + 1)?;
            out.extend(isolate(f, &b, n - na, depth + 1)?);
            return Ok(out);
        }
    }
    Err(Error::Bracket(format!("every split of the box at {} passes through a zero", c)))
}

/// Parameters of the strip zero collector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StripOptions<T> {
    /// Zeros with `|z| <= radius` are returned.
    pub radius: T,
    /// Half-height `H` of the strip.
    pub height: T,
    pub column_width: T,
    /// `f(conj z) = conj f(z)`: real zeros are found by a sign scan and the
    /// lower half-plane by reflection.
    pub real_on_axis: bool,
    pub scan_step: T,
}

impl<T: Real> StripOptions<T> {
    pub fn new(radius: T) -> Self {
        StripOptions {
            radius,
            height: T::lit(10.0),
            column_width: T::lit(2.0),
            real_on_axis: false,
            scan_step: T::lit(0.02),
        }
    }

    pub fn real_on_axis(mut self, yes: bool) -> Self {
        self.real_on_axis = yes;
        self
    }

    pub fn height(mut self, h: T) -> Self {
        self.height = h;
        self
    }
}

/// Vertical edge data for one column boundary.
struct Vertical<T> {
    x: T,
    /// Phase along `x + i[ye, H]` (symmetric mode) or `x + i[-H, H]`.
    upper: T,
    /// Phase along `x + i[-ye, ye]` (symmetric mode only).
    band: T,
}

const BAND: f64 = 0.05;

fn vertical<T, F>(f: &F, x0: T, w: T, opts: &StripOptions<T>, tol: T) -> Result<Vertical<T>>
where
    T: Real,
    F: Fn(Complex<T>) -> Complex<T> + Sync,
{
    let h = opts.height;
    let ye = T::lit(BAND);
    for k in 0..8 {
        let shift = if k == 0 { 0.0 } else { JITTER_STEPS[(k - 1) % 5] * 0.037 * k.div_ceil(5) as f64 };
        let x = x0 + w * T::lit(shift);
        if opts.real_on_axis {
            let up = segment_phase(f, cplx(x, ye), cplx(x, h), tol)?;
            let band = segment_phase(f, cplx(x, -ye), cplx(x, ye), tol)?;
            if let (Some(upper), Some(band)) = (up, band) {
                return Ok(Vertical { x, upper, band });
            }
        } else if let Some(upper) = segment_phase(f, cplx(x, -h), cplx(x, h), tol)? {
            return Ok(Vertical {
                x,
                upper,
                band: T::zero(),
            });
        }
    }
    Err(Error::NearContourZero {
        radius: x0.as_f64(),
        distance: tol.as_f64(),
        retries: 8,
    })
}

fn by_modulus<T: Real>(a: &Complex<T>, b: &Complex<T>) -> std::cmp::Ordering {
    let key = |z: &Complex<T>| (z.norm(), z.re, z.im);
    let (ka, kb) = (key(a), key(b));
    ka.0.partial_cmp(&kb.0)
        .unwrap_or(std::cmp::Ordering::Equal)
        .then(ka.1.partial_cmp(&kb.1).unwrap_or(std::cmp::Ordering::Equal))
        .then(ka.2.partial_cmp(&kb.2).unwrap_or(std::cmp::Ordering::Equal))
}

/// All zeros of `f` in the strip `|Im z| <= H` with `|z| <= radius`,
/// repeated by multiplicity and ordered by modulus.
pub fn collect_zeros_strip<T, F>(f: &F, opts: &StripOptions<T>) -> Result<Vec<Complex<T>>>
where
    T: Real,
    F: Fn(Complex<T>) -> Complex<T> + Sync,
{
    if !(opts.radius > T::zero()) || !(opts.height > T::zero()) || !(opts.column_width > T::zero()) {
        return Err(Error::invalid("strip", "radius, height and column width must be positive"));
    }
    let h = opts.height;
    let reach = opts.radius + T::lit(0.618034);
    let ncol = (reach * T::lit(2.0) / opts.column_width).ceil().to_usize().unwrap_or(1).max(1);
    let w = reach * T::lit(2.0) / T::from_count(ncol);
    let tol = T::lit(NEAR_ZERO_FRACTION) * w;

    let verticals: Vec<Vertical<T>> = (0..=ncol)
        .map(|j| vertical(f, -reach + w * T::from_count(j), w, opts, tol))
        .collect::<Result<_>>()?;
    let top: Vec<Option<T>> = (0..ncol)
        .map(|j| segment_phase(f, cplx(verticals[j].x, h), cplx(verticals[j + 1].x, h), tol))
        .collect::<Result<_>>()?;
    if top.iter().any(|p| p.is_none()) {
        return Err(Error::NearContourZero {
            radius: h.as_f64(),
            distance: tol.as_f64(),
            retries: 0,
        });
    }
    let top: Vec<T> = top.into_iter().map(|p| p.unwrap_or_else(T::zero)).collect();

    let zeros: Vec<Vec<Complex<T>>> = if opts.real_on_axis {
        let ye = T::lit(BAND);
        let g = |x: T| f(real(x)).re;
        let reals = find_roots(&g, verticals[0].x, verticals[ncol].x, opts.scan_step);
        (0..ncol)
            .into_par_iter()
            .map(|j| {
                let (l, r) = (&verticals[j], &verticals[j + 1]);
                let full = (r.upper - l.upper) * T::lit(2.0) + (r.band - l.band) - top[j] * T::lit(2.0);
                let column = Rect::new(l.x, r.x, -h, h);
                let Some(edge) = segment_phase(f, cplx(l.x, ye), cplx(r.x, ye), tol)? else {
                    return isolate(f, &column, rounded_count(full)?.0, 0);
                };
                let (upper, _) = rounded_count(edge + r.upper - top[j] - l.upper)?;
                let (band, _) = rounded_count(r.band - l.band - edge * T::lit(2.0))?;
                let inside: Vec<Complex<T>> = reals
                    .iter()
                    .filter(|root| root.x > l.x && root.x < r.x)
                    .map(|root| real(root.x))
                    .collect();
                if inside.len() != band {
                    return isolate(f, &column, rounded_count(full)?.0, 0);
                }
                let complex = isolate(f, &Rect::new(l.x, r.x, ye, h), upper, 0)?;
                let mut out = inside;
                for z in complex {
                    out.push(z);
                    out.push(z.conj());
                }
                Ok(out)
            })
            .collect::<Result<_>>()?
    } else {
        let bottom: Vec<Option<T>> = (0..ncol)
            .map(|j| segment_phase(f, cplx(verticals[j].x, -h), cplx(verticals[j + 1].x, -h), tol))
            .collect::<Result<_>>()?;
        (0..ncol)
            .into_par_iter()
            .map(|j| {
                let (l, r) = (&verticals[j], &verticals[j + 1]);
                let b = bottom[j].ok_or(Error::NearContourZero {
                    radius: h.as_f64(),
                    distance: tol.as_f64(),
                    retries: 0,
                })?;
                let (n, _) = rounded_count(b + r.upper - top[j] - l.upper)?;
                isolate(f, &Rect::new(l.x, r.x, -h, h), n, 0)
            })
            .collect::<Result<_>>()?
    };
    let mut all: Vec<Complex<T>> = zeros
        .into_iter()
        .flatten()
        .filter(|z| z.norm() <= opts.radius)
        .collect();
    all.sort_by(by_modulus);
    Ok(all)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    type C64 = Complex<f64>;

    #[test]
    fn sine_counts() {
        let f = |z: C64| (z * PI).sin();
        assert_eq!(count_zeros_disk(&f, 5.5, 64).unwrap().count, 11);
        let g = |z: C64| (z * PI).sin() / z;
        assert_eq!(count_zeros_disk(&g, 5.5, 64).unwrap().count, 10);
    }

    #[test]
    fn winding_is_near_integer() {
        let f = |z: C64| (z * z + 2.0) * (z - 0.3).exp();
        let c = count_zeros_disk(&f, 3.0, 32).unwrap();
        assert_eq!(c.count, 2);
        assert!((c.winding - 2.0).abs() < 1e-3);
    }

    #[test]
    fn zero_on_contour_moves_radius() {
        let f = |z: C64| z - 2.0;
        let c = count_zeros_disk(&f, 2.0, 64).unwrap();
        assert!(c.radius != 2.0);
        assert_eq!(c.count, usize::from(c.radius > 2.0));
    }

    #[test]
    fn rectangle_count() {
        let f = |z: C64| (z * PI).sin();
        let r = Rect::new(0.5, 3.5, -1.0, 1.0);
        assert_eq!(count_zeros_rect(&f, &r).unwrap(), Some(3));
    }

    #[test]
    fn strip_collects_complex_pairs() {
        // zeros at 2 pi k +- i acosh 2
        let f = |z: C64| z.cos() - 2.0;
        let opts = StripOptions::new(20.0).real_on_axis(true).height(4.0);
        let zs = collect_zeros_strip(&f, &opts).unwrap();
        let y = 2f64.acosh();
        let expect: Vec<C64> = [-3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0]
            .iter()
            .flat_map(|&k| [C64::new(2.0 * PI * k, y), C64::new(2.0 * PI * k, -y)])
            .collect();
        assert_eq!(zs.len(), expect.len());
        for e in expect {
            assert!(zs.iter().any(|z| (z - e).norm() < 1e-10), "{e} missing from {zs:?}");
        }
    }

    #[test]
    fn strip_generic_mode_finds_real_zeros() {
        // (1 - e^{-i pi z}) / z vanishes at nonzero even integers
        let f = |z: C64| {
            if z.norm() == 0.0 {
                C64::new(0.0, PI)
            } else {
                (C64::new(1.0, 0.0) - (C64::new(0.0, -PI) * z).exp()) / z
            }
        };
        let zs = collect_zeros_strip(&f, &StripOptions::new(9.0)).unwrap();
        assert_eq!(zs.len(), 8);
        for z in &zs {
            let k = (z.re / 2.0).round();
            assert!(k != 0.0 && (z - C64::new(2.0 * k, 0.0)).norm() < 1e-10, "{z}");
        }
    }

    #[test]
    fn double_zero_is_repeated() {
        let f = |z: C64| (z - C64::new(0.7, 0.2)).powi(2) * (z + 3.0);
        let zs = collect_zeros_strip(&f, &StripOptions::new(5.0)).unwrap();
        assert_eq!(zs.len(), 3);
        assert!((zs[0] - C64::new(0.7, 0.2)).norm() < 1e-6);
        assert!((zs[1] - C64::new(0.7, 0.2)).norm() < 1e-6);
    }
}
