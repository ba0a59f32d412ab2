//! Quantitative instability of the spectral difference: the L2 norm chain,
//! a Plancherel-Polya type pointwise bound, the convex-hull lower bound on
//! `(h + 1)(a_N + |hull supp qhat|)`, its zero-set version, and
//! interpolation along the zeros of a sine-type function.

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::charfn::GhatFunction;
use crate::contour::{collect_zeros_strip, StripOptions};
use crate::error::{Error, Result};
use crate::model::{fourier_coefficients, BoundaryOrder, Difference, PaleyWiener, Potential, ProblemConfig, Profile};
use crate::quad::{GaussLegendre, DEFAULT_ORDER};
use crate::scalar::{cplx, is_finite_c, real, Real};
use crate::spectrum::match_points;

/// Initial half-width of real-axis integrals.
pub const DEFAULT_CUTOFF: f64 = 16.0;
pub const MAX_CUTOFF: f64 = 4096.0;
/// Largest tail share of an L2 norm accepted without raising the cutoff.
pub const TAIL_FRACTION: f64 = 0.01;
/// Support threshold relative to the sup norm of the sampled difference.
pub const SUPPORT_EPS: f64 = 1e-9;
pub const H_MIN: f64 = 3.0;
/// Half-length of the minimum-modulus sweep along the probe line.
pub const PROBE_SWEEP: f64 = 20.0;
const PROBE_STEP: f64 = 0.1;
/// A probe line whose minimum modulus falls below this fraction of its
/// maximum is treated as passing through a zero.
const PROBE_FLOOR: f64 = 1e-8;
const PANEL_WIDTH: f64 = 0.125;
const TAIL_SAMPLES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct L2Norm<T> {
    pub norm: T,
    /// Share of `norm^2` contributed by the fitted tail beyond `cutoff`.
    pub tail_fraction: T,
    pub cutoff: T,
}

fn integrate_sq<T, F>(f: &F, lo: T, hi: T, rule: &GaussLegendre<T>) -> T
where
    T: Real,
    F: Fn(Complex<T>) -> Complex<T> + Sync,
{
    let n = ((hi - lo) / T::lit(PANEL_WIDTH)).ceil().to_usize().unwrap_or(1).max(1);
    let w = (hi - lo) / T::from_count(n);
    (0..n)
        .into_par_iter()
        .map(|k| {
            let a = lo + w * T::from_count(k);
            rule.integrate(a, a + w, |x| f(real(x)).norm_sqr())
        })
        .sum()
}

/// `K` in `|f(x)|^2 ~ K |x|^-d`, averaged over `T/2 <= |x| <= T`.
fn tail_constant<T, F>(f: &F, cutoff: T, decay: i32) -> T
where
    T: Real,
    F: Fn(Complex<T>) -> Complex<T> + Sync,
{
    let half = cutoff * T::lit(0.5);
    let pts: Vec<T> = (0..TAIL_SAMPLES)
        .map(|j| half + half * (T::from_count(j) + T::lit(0.5)) / T::from_count(TAIL_SAMPLES))
        .collect();
    let s: T = pts
        .par_iter()
        .map(|&x| (f(real(x)).norm_sqr() + f(real(-x)).norm_sqr()) * x.powi(decay))
        .sum();
    s / T::from_count(2 * TAIL_SAMPLES)
}

/// `||f||_{L2(R)}` from `int_{-T}^{T} |f|^2` plus the tail
/// `2 K / ((d - 1) T^(d - 1))`, where `|f|^2 = O(|x|^-d)`. The cutoff is
/// doubled until the tail is below 1% of the total.
pub fn l2_norm_real_axis<T, F>(f: &F, cutoff: T, decay_order: u32) -> Result<L2Norm<T>>
where
    T: Real,
    F: Fn(Complex<T>) -> Complex<T> + Sync,
{
    if decay_order < 2 {
        return Err(Error::invalid("decay_order", "must be at least 2 for a finite tail"));
    }
    if !(cutoff > T::zero()) {
        return Err(Error::invalid("T_cutoff", "must be positive"));
    }
    let d = decay_order as i32;
    let rule = GaussLegendre::new(DEFAULT_ORDER);
    let mut t = cutoff;
    let mut inner = integrate_sq(f, -t, t, &rule);
    loop {
        if !inner.is_finite() {
            return Err(Error::NonFinite {
                context: "L2 integrand on the real axis".into(),
            });
        }
        let k = tail_constant(f, t, d);
        let tail = T::lit(2.0) * k / (T::from_count(decay_order as usize - 1) * t.powi(d - 1));
        let total = inner + tail;
        if total == T::zero() {
            return Ok(L2Norm {
                norm: T::zero(),
                tail_fraction: T::zero(),
                cutoff: t,
            });
        }
        let fraction = tail / total;
        if fraction < T::lit(TAIL_FRACTION) {
            return Ok(L2Norm {
                norm: total.sqrt(),
                tail_fraction: fraction,
                cutoff: t,
            });
        }
        if t * T::lit(2.0) > T::lit(MAX_CUTOFF) {
            return Err(Error::Quadrature {
                refinements: 0,
                estimate: fraction.as_f64(),
            });
        }
        inner = inner + integrate_sq(f, -t * T::lit(2.0), -t, &rule) + integrate_sq(f, t, t * T::lit(2.0), &rule);
        t = t * T::lit(2.0);
    }
}

/// `sqrt((1/2pi) int_0^pi |q|^2)`, the l2 norm of the full coefficient sequence.
pub fn coefficient_norm<T: Real>(q: &impl Profile<T>) -> T {
    let rule = GaussLegendre::new(DEFAULT_ORDER);
    let b = q.breakpoints();
    let s: T = rule.composite(&b, T::zero(), T::one(), |t| {
        let v = q.eval(t);
        v * v
    });
    (s / T::TAU()).sqrt()
}

/// Constant of `||Ghat||_{L2(R)} <= C_norm ||c||_{l2}` for `alpha = beta = 0`:
///
/// ```text
/// C_norm = sqrt(2 pi) (pi sum_i sqrt(a_i^3 / 3) + pi^2 / sqrt(3) sum_i sqrt(a_i))
/// ```
pub fn norm_constant<T: Real>(config: &ProblemConfig<T>) -> Result<T> {
    if config.alpha() != BoundaryOrder::Value || config.beta() != BoundaryOrder::Value {
        return Err(Error::Undefined(
            "the norm chain is available for alpha = beta = 0 only".into(),
        ));
    }
    let pi = T::PI();
    let three = T::lit(3.0);
    let s1: T = config.frozen().iter().map(|&a| (a * a * a / three).sqrt()).sum();
    let s2: T = config.frozen().iter().map(|&a| a.sqrt()).sum();
    Ok(T::TAU().sqrt() * (pi * s1 + pi * pi / three.sqrt() * s2))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParsevalReport<T> {
    /// `||Ghat||_{L2(R)}`.
    pub lhs: T,
    /// `C_norm ||c||_{l2}`.
    pub rhs: T,
    pub c_norm: T,
    pub coeff_norm: T,
    /// Share of `||c||^2` outside `|k| <= K`.
    pub coeff_tail: T,
}

/// Both sides of the norm chain for the pair `(q1, q2)`.
pub fn parseval_bound<T: Real>(
    q1: &Potential<T>,
    q2: &Potential<T>,
    config: &ProblemConfig<T>,
    band_limit: usize,
) -> Result<ParsevalReport<T>> {
    parseval_bound_with(q1, q2, config, band_limit, T::lit(DEFAULT_CUTOFF))
}

/// As [`parseval_bound`], with the initial real-axis cutoff for `||Ghat||`.
pub fn parseval_bound_with<T: Real>(
    q1: &Potential<T>,
    q2: &Potential<T>,
    config: &ProblemConfig<T>,
    band_limit: usize,
    cutoff: T,
) -> Result<ParsevalReport<T>> {
    let c_norm = norm_constant(config)?;
    let qhat = Difference { q1, q2 };
    let coeff_norm = coefficient_norm(&qhat);
    let coeffs = fourier_coefficients(&qhat, band_limit)?;
    let full = coeff_norm * coeff_norm;
    let partial = coeffs.l2_norm() * coeffs.l2_norm();
    let coeff_tail = if full > T::zero() {
        ((full - partial) / full).max(T::zero())
    } else {
        T::zero()
    };
    if coeff_tail > T::lit(TAIL_FRACTION) {
        return Err(Error::invalid(
            "numeric.K_fourier",
            format!("coefficient tail is {:.3}% of the norm; raise K", coeff_tail.as_f64() * 100.0),
        ));
    }
    let g = GhatFunction::new(q1.clone(), q2.clone(), config.clone());
    let lhs = if full == T::zero() {
        T::zero()
    } else {
        l2_norm_real_axis(&|z| g.value(z), cutoff, 4)?.norm
    };
    Ok(ParsevalReport {
        lhs,
        rhs: c_norm * coeff_norm,
        c_norm,
        coeff_norm,
        coeff_tail,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlancherelReport<T> {
    /// `max |f(x+iy)|^2 / ((2/pi) e^{sigma(|y|+1)} ||f||^2)`.
    pub max_ratio: T,
    pub worst: (T, T),
    /// The same maximum with `e^{2 sigma(|y|+1)}` in the denominator.
    pub max_ratio_squared_type: T,
    pub l2_norm: T,
}

/// Pointwise ratio test of `|f(x+iy)|^2 <= (2/pi) e^{sigma(|y|+1)} ||f||^2`.
pub fn plancherel_polya_check<T, F>(f: &F, sigma: T, points: &[(T, T)]) -> Result<PlancherelReport<T>>
where
    T: Real,
    F: Fn(Complex<T>) -> Complex<T> + Sync,
{
    if points.is_empty() {
        return Err(Error::invalid("points", "at least one probe point is required"));
    }
    let l2 = l2_norm_real_axis(f, T::lit(DEFAULT_CUTOFF), 2)?.norm;
    if l2 == T::zero() {
        return Err(Error::Undefined("||f|| = 0 makes the ratio meaningless".into()));
    }
    let base = T::lit(2.0) / T::PI() * l2 * l2;
    let ratios: Vec<(T, T)> = points
        .par_iter()
        .map(|&(x, y)| {
            let v = f(cplx(x, y)).norm_sqr();
            let e = sigma * (y.abs() + T::one());
            (v / (base * e.exp()), v / (base * (e + e).exp()))
        })
        .collect();
    let mut report = PlancherelReport {
        max_ratio: T::neg_infinity(),
        worst: points[0],
        max_ratio_squared_type: T::neg_infinity(),
        l2_norm: l2,
    };
    for (p, (r, r2)) in points.iter().zip(ratios) {
        if !r.is_finite() {
            return Err(Error::NonFinite {
                context: format!("ratio at ({}, {})", p.0, p.1),
            });
        }
        if r > report.max_ratio {
            report.max_ratio = r;
            report.worst = *p;
        }
        report.max_ratio_squared_type = report.max_ratio_squared_type.max(r2);
    }
    Ok(report)
}

/// `[lo, hi]` hull of the support of a sampled profile, thresholded at
/// `SUPPORT_EPS` times its sup norm. Adjacent nodes are included since the
/// interpolant is non-zero up to them.
pub fn support_hull<T: Real>(q: &impl Profile<T>) -> Option<(T, T)> {
    let b = q.breakpoints();
    let v: Vec<T> = b.iter().map(|&x| q.eval(x).abs()).collect();
    let sup = v.iter().fold(T::zero(), |m, &x| m.max(x));
    if sup == T::zero() {
        return None;
    }
    let thr = T::lit(SUPPORT_EPS) * sup;
    let first = v.iter().position(|&x| x > thr)?;
    let last = v.iter().rposition(|&x| x > thr)?;
    Some((b[first.saturating_sub(1)], b[(last + 1).min(b.len() - 1)]))
}

/// Theorem-level report. `C` is `(2/pi) C_norm^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundReport<T> {
    pub lhs: T,
    pub rhs: T,
    #[serde(rename = "C")]
    pub c: T,
    pub h: T,
    pub x: T,
    pub holds: bool,
}

/// `max(|Ghat(x + ih)|, |Ghat(x - ih)|)` after a minimum-modulus sweep of
/// both lines.
fn probe<T: Real>(g: &GhatFunction<T>, h: T, x: T) -> Result<T> {
    let n = (T::lit(2.0 * PROBE_SWEEP / PROBE_STEP)).to_usize().unwrap_or(400);
    for sign in [T::one(), -T::one()] {
        let vals: Vec<T> = (0..=n)
            .into_par_iter()
            .map(|j| {
                let xr = x - T::lit(PROBE_SWEEP) + T::lit(PROBE_STEP) * T::from_count(j);
                g.value(cplx(xr, sign * h)).norm()
            })
            .collect();
        let (lo, hi) = vals.iter().fold((T::infinity(), T::zero()), |(a, b), &v| (a.min(v), b.max(v)));
        if !hi.is_finite() {
            return Err(Error::Range {
                re: x.as_f64(),
                im: (sign * h).as_f64(),
                hint: "probe line too far from the real axis".into(),
            });
        }
        if !(lo > T::lit(PROBE_FLOOR) * hi) {
            return Err(Error::ZeroOnProbeLine { h: (sign * h).as_f64() });
        }
    }
    let up = g.value(cplx(x, h)).norm();
    let down = g.value(cplx(x, -h)).norm();
    if up == T::zero() || down == T::zero() {
        return Err(Error::ZeroOnProbeLine { h: h.as_f64() });
    }
    Ok(up.max(down))
}

/// Checks `(h + 1)(a_N + |hull supp qhat|) >= ln(|Ghat(x +- ih)|^2 / (C ||c||^2))`.
pub fn theorem32_bound<T: Real>(
    q1: &Potential<T>,
    q2: &Potential<T>,
    config: &ProblemConfig<T>,
    h: T,
    x: T,
    band_limit: usize,
) -> Result<BoundReport<T>> {
    if !(h >= T::lit(H_MIN)) {
        return Err(Error::invalid("h", format!("probe height must be at least {H_MIN}")));
    }
    let qhat = Difference { q1, q2 };
    let (lo, hi) = support_hull(&qhat).ok_or_else(|| Error::Undefined("q1 = q2, the spectral difference vanishes identically".into()))?;
    let pr = parseval_bound_coefficients(&qhat, config, band_limit)?;
    let c = T::lit(2.0) / T::PI() * pr.0 * pr.0;
    let g = GhatFunction::new(q1.clone(), q2.clone(), config.clone());
    let gmax = probe(&g, h, x)?;
    let lhs = (h + T::one()) * (config.last_frozen() + (hi - lo));
    let rhs = (gmax * gmax / (c * pr.1 * pr.1)).ln();
    Ok(BoundReport {
        lhs,
        rhs,
        c,
        h,
        x,
        holds: lhs >= rhs - T::lit(1e-9),
    })
}

/// `(C_norm, ||c||)` after the coefficient tail check.
fn parseval_bound_coefficients<T: Real>(qhat: &impl Profile<T>, config: &ProblemConfig<T>, band_limit: usize) -> Result<(T, T)> {
    let c_norm = norm_constant(config)?;
    let full = coefficient_norm(qhat);
    let partial = fourier_coefficients(qhat, band_limit)?.l2_norm();
    let tail = (full * full - partial * partial) / (full * full);
    if tail > T::lit(TAIL_FRACTION) {
        return Err(Error::invalid(
            "numeric.K_fourier",
            format!("coefficient tail is {:.3}% of the norm; raise K", tail.as_f64() * 100.0),
        ));
    }
    Ok((c_norm, full))
}

/// Zeros `beta_k` of a sine-type function `F` with `F'(beta_k)`.
pub struct SineTypeSystem<T, F> {
    f: F,
    zeros: Vec<Complex<T>>,
    derivs: Vec<Complex<T>>,
    sigma: T,
    /// Summation order: increasing `|beta_k|`.
    order: Vec<usize>,
}

impl<T: Real, F: Fn(Complex<T>) -> Complex<T> + Sync> SineTypeSystem<T, F> {
    /// Derivatives are taken by central differences.
    pub fn new(f: F, zeros: Vec<Complex<T>>, sigma: T) -> Result<Self> {
        let derivs = zeros
            .iter()
            .map(|&b| {
                let h = T::lit(1e-6) * b.norm().max(T::one());
                (f(b + real(h)) - f(b - real(h))) / (h + h)
            })
            .collect();
        Self::with_derivatives(f, zeros, derivs, sigma)
    }

    pub fn with_derivatives(f: F, zeros: Vec<Complex<T>>, derivs: Vec<Complex<T>>, sigma: T) -> Result<Self> {
        if zeros.len() != derivs.len() {
            return Err(Error::invalid("derivs", "one derivative per zero is required"));
        }
        if !(sigma > T::zero()) {
            return Err(Error::invalid("sigma", "must be positive"));
        }
        for (b, d) in zeros.iter().zip(&derivs) {
            if !is_finite_c(*d) || d.norm() <= T::lit(1e-12) {
                return Err(Error::NotSineType(format!("F'({b}) = {d}: zero is not simple")));
            }
        }
        let mut order: Vec<usize> = (0..zeros.len()).collect();
        order.sort_by(|&i, &j| {
            zeros[i]
                .norm()
                .partial_cmp(&zeros[j].norm())
                .expect("finite zeros")
                .then(zeros[i].re.partial_cmp(&zeros[j].re).expect("finite zeros"))
        });
        let mut by_re: Vec<Complex<T>> = zeros.clone();
        by_re.sort_by(|a, b| a.re.partial_cmp(&b.re).expect("finite zeros"));
        let gap = by_re
            .windows(2)
            .map(|w| (w[1] - w[0]).norm())
            .fold(T::infinity(), |m, g| m.min(g));
        if gap == T::zero() {
            return Err(Error::NotSineType("zeros are not separated".into()));
        }
        Ok(SineTypeSystem {
            f,
            zeros,
            derivs,
            sigma,
            order,
        })
    }

    pub fn zeros(&self) -> &[Complex<T>] {
        &self.zeros
    }

    pub fn derivatives(&self) -> &[Complex<T>] {
        &self.derivs
    }

    pub fn sigma(&self) -> T {
        self.sigma
    }

    /// Smallest distance between zeros (`2 delta` of the separation condition).
    pub fn separation(&self) -> T {
        let mut m = T::infinity();
        for i in 0..self.zeros.len() {
            for j in i + 1..self.zeros.len() {
                m = m.min((self.zeros[i] - self.zeros[j]).norm());
            }
        }
        m
    }

    /// Largest `|Im beta_k|`.
    pub fn strip_height(&self) -> T {
        self.zeros.iter().fold(T::zero(), |m, z| m.max(z.im.abs()))
    }
}

/// `sin z` with zeros `k pi`, `|k| <= k_max`.
pub fn sine_system<T: Real>(k_max: usize) -> SineTypeSystem<T, fn(Complex<T>) -> Complex<T>> {
    fn sine<T: Real>(z: Complex<T>) -> Complex<T> {
        z.sin()
    }
    let k = k_max as i64;
    let zeros: Vec<Complex<T>> = (-k..=k).map(|j| real(T::PI() * T::from_i64(j).expect("small integer"))).collect();
    let derivs = (-k..=k)
        .map(|j| real(if j % 2 == 0 { T::one() } else { -T::one() }))
        .collect();
    SineTypeSystem::with_derivatives(sine::<T> as fn(Complex<T>) -> Complex<T>, zeros, derivs, T::one())
        .expect("sin z is sine-type")
}

/// `f(z) = sum_k c_k F(z) / (F'(beta_k) (z - beta_k))`, summed in order of
/// increasing `|beta_k|`; at `z = beta_k` returns `c_k`.
pub fn sine_type_interpolate<T, F>(sys: &SineTypeSystem<T, F>, coeffs: &[Complex<T>], z: Complex<T>) -> Result<Complex<T>>
where
    T: Real,
    F: Fn(Complex<T>) -> Complex<T> + Sync,
{
    if coeffs.len() != sys.zeros.len() {
        return Err(Error::invalid("coeffs", "one coefficient per zero is required"));
    }
    if let Some(k) = sys.zeros.iter().position(|&b| b == z) {
        return Ok(coeffs[k]);
    }
    let fz = (sys.f)(z);
    let mut acc = cplx(T::zero(), T::zero());
    for &k in &sys.order {
        acc = acc + coeffs[k] / (sys.derivs[k] * (z - sys.zeros[k]));
    }
    Ok(acc * fz)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorollaryStep<T> {
    pub t: T,
    /// `||c^1 - c^2||_{l2}`.
    pub coeff_distance: T,
    /// `||beta^1 - beta^2||_{l2}` over the matched zeros.
    pub zero_distance: T,
    pub matched: usize,
    pub surplus: usize,
    /// `max |Ghat(x +- ih)|`.
    pub probe: T,
    pub rhs: T,
    pub holds: bool,
    /// Worst relative deviation in `|f1(beta2)| = |f1'(mid)| |beta1 - beta2|`.
    pub mean_value_error: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorollaryReport<T> {
    pub lhs: T,
    /// Constant fitted on the first sweep entry.
    #[serde(rename = "C")]
    pub c: T,
    pub h: T,
    pub x: T,
    pub steps: Vec<CorollaryStep<T>>,
    /// `zero_distance` strictly decreases as `t` decreases.
    pub monotone: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorollaryOptions<T> {
    pub sweep: Vec<T>,
    pub x: T,
    /// Zeros of the transforms are compared inside `|z| <= radius`.
    pub radius: T,
    pub height: T,
}

impl<T: Real> Default for CorollaryOptions<T> {
    fn default() -> Self {
        CorollaryOptions {
            sweep: vec![T::one(), T::lit(0.5), T::lit(0.25)],
            x: T::zero(),
            radius: T::lit(30.0),
            height: T::lit(10.0),
        }
    }
}

/// Zeros of `F(q)` in the strip.
pub fn transform_zeros<T: Real>(q: &impl Profile<T>, radius: T, height: T) -> Result<Vec<Complex<T>>> {
    let pw = PaleyWiener::new(q);
    let f = |z: Complex<T>| pw.eval(z);
    collect_zeros_strip(&f, &StripOptions::new(radius).height(height))
}

/// Worst relative deviation from `|f(b2)| = |f'((b1 + b2)/2)| |b1 - b2|` over
/// pairs with `b1 != b2`, where `f(b1) = 0`.
pub fn mean_value_error<T, F>(f: &F, pairs: &[(Complex<T>, Complex<T>)]) -> T
where
    T: Real,
    F: Fn(Complex<T>) -> Complex<T>,
{
    let mut worst = T::zero();
    for &(b1, b2) in pairs {
        let gap = (b1 - b2).norm();
        if gap == T::zero() {
            continue;
        }
        let mid = (b1 + b2) * T::lit(0.5);
        let h = T::lit(1e-5) * mid.norm().max(T::one());
        let d = (f(mid + real(h)) - f(mid - real(h))) / (h + h);
        let predicted = d.norm() * gap;
        worst = worst.max(((f(b2).norm() - f(b1).norm()) - predicted).abs() / predicted);
    }
    worst
}

/// Zero-set version of the bound: `q2` is replaced by `q1 + t (q2 - q1)`
/// for each `t` in the sweep; zeros of `F(q1)` and `F(q2_t)` are matched and
/// the constant in `ln(|Ghat|^2 / (C ||beta1 - beta2||^2))` is fitted on
/// the first entry.
pub fn corollary_bound<T: Real>(
    q1: &Potential<T>,
    q2: &Potential<T>,
    config: &ProblemConfig<T>,
    h: T,
    band_limit: usize,
    opts: &CorollaryOptions<T>,
) -> Result<CorollaryReport<T>> {
    if opts.sweep.is_empty() || opts.sweep.iter().any(|t| !(*t > T::zero())) {
        return Err(Error::invalid("sweep", "needs at least one positive scale"));
    }
    let x = opts.x;
    let (lo, hi) = support_hull(&Difference { q1, q2 })
        .ok_or_else(|| Error::Undefined("q1 = q2, nothing to compare".into()))?;
    let lhs = (h + T::one()) * (config.last_frozen() + (hi - lo));
    for (i, q) in [q1, q2].into_iter().enumerate() {
        if q.sup_norm() == T::zero() {
            return Err(Error::invalid(
                format!("potentials[{i}]"),
                "the transform vanishes identically, so it has no zero set to compare",
            ));
        }
    }
    let base = transform_zeros(q1, opts.radius, opts.height)?;
    let pw1 = PaleyWiener::new(q1);
    let f1 = |z: Complex<T>| pw1.eval(z);
    let mut steps = Vec::with_capacity(opts.sweep.len());
    let mut fitted: Option<T> = None;
    for &t in &opts.sweep {
        let qt = q1.lerp(q2, t)?;
        let qhat = Difference { q1, q2: &qt };
        let (c_norm, coeff) = parseval_bound_coefficients(&qhat, config, band_limit)?;
        let c_thm = T::lit(2.0) / T::PI() * c_norm * c_norm;
        let zs = transform_zeros(&qt, opts.radius, opts.height)?;
        let m = match_points(&base, &zs);
        let pairs: Vec<(Complex<T>, Complex<T>)> = m.pairs.iter().map(|&(i, j, _)| (base[i], zs[j])).collect();
        let g = GhatFunction::new(q1.clone(), qt.clone(), config.clone());
        let gmax = probe(&g, h, x)?;
        if m.distance == T::zero() {
            return Err(Error::Undefined(format!("zero sets coincide at t = {t}")));
        }
        let c = *fitted.get_or_insert(c_thm * coeff * coeff / (m.distance * m.distance));
        let rhs = (gmax * gmax / (c * m.distance * m.distance)).ln();
        steps.push(CorollaryStep {
            t,
            coeff_distance: coeff,
            zero_distance: m.distance,
            matched: m.pairs.len(),
            surplus: m.surplus,
            probe: gmax,
            rhs,
            holds: lhs >= rhs - T::lit(1e-9),
            mean_value_error: mean_value_error(&f1, &pairs),
        });
    }
    let mut by_t: Vec<&CorollaryStep<T>> = steps.iter().collect();
    by_t.sort_by(|a, b| b.t.partial_cmp(&a.t).expect("finite scales"));
    let monotone = by_t.windows(2).all(|w| w[1].zero_distance < w[0].zero_distance);
    Ok(CorollaryReport {
        lhs,
        c: fitted.unwrap_or_else(T::zero),
        h,
        x,
        steps,
        monotone,
    })
}
