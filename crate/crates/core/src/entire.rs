//! Growth and zero statistics of entire functions of exponential type:
//! indicator and type from ray fits, zero sets and their density, effective
//! support width from zero counts, and canonical products over zeros.

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::contour::{collect_zeros_strip, count_zeros_disk, StripOptions};
use crate::error::{Error, Result};
use crate::scalar::{cplx, is_finite_c, Real};

/// Bound on `r |sin theta| sigma` so that `e^{sigma |Im rho|}` stays finite.
pub const OVERFLOW_EXPONENT: f64 = 700.0;
/// Angular jitter applied when a ray passes through a zero.
pub const THETA_JITTER: f64 = 1e-4;
const JITTER_RETRIES: usize = 8;
/// Samples on the smallest counting circle.
pub const COUNT_SAMPLES: usize = 512;

/// Least-squares line fitted to `(x_i, y_i)`: `(slope, intercept, rms residual)`.
pub(crate) fn line_fit<T: Real>(x: &[T], y: &[T]) -> (T, T, T) {
    let n = T::from_count(x.len());
    let mx = x.iter().copied().sum::<T>() / n;
    let my = y.iter().copied().sum::<T>() / n;
    let (mut sxy, mut sxx) = (T::zero(), T::zero());
    for (&a, &b) in x.iter().zip(y) {
        sxy = sxy + (a - mx) * (b - my);
        sxx = sxx + (a - mx) * (a - mx);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss: T = x
        .iter()
        .zip(y)
        .map(|(&a, &b)| {
            let e = b - (intercept + slope * a);
            e * e
        })
        .sum();
    (slope, intercept, (ss / n).sqrt())
}

/// Ray fit of `ln |f(r e^{i theta})|` against `r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IndicatorFit<T> {
    /// Angle actually used (after any jitter).
    pub theta: T,
    pub h: T,
    /// RMS residual of the fit.
    pub residual: T,
}

/// Grid evaluations of an entire function on rays `theta` at radii `r`.
pub struct EntireProbe<T, F> {
    f: F,
    r_list: Vec<T>,
    thetas: Vec<T>,
    /// `values[i][j] = f(r_j e^{i theta_i})`.
    values: Vec<Vec<Complex<T>>>,
}

fn check_radii<T: Real>(r_list: &[T]) -> Result<()> {
    if r_list.len() < 5 {
        return Err(Error::invalid("r_list", "at least 5 radii are required"));
    }
    if !(r_list[0] > T::zero()) || r_list.iter().any(|r| !r.is_finite()) {
        return Err(Error::invalid("r_list", "radii must be positive and finite"));
    }
    if r_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::invalid("r_list", "radii must be strictly increasing"));
    }
    Ok(())
}

impl<T: Real, F: Fn(Complex<T>) -> Complex<T> + Sync> EntireProbe<T, F> {
    /// Evaluates `f` on the grid. `sigma` is an a priori type used by the
    /// overflow guard.
    pub fn new(f: F, r_list: Vec<T>, thetas: Vec<T>, sigma: T) -> Result<Self> {
        check_radii(&r_list)?;
        if thetas.is_empty() {
            return Err(Error::invalid("theta_list", "at least one angle is required"));
        }
        let r_max = r_list[r_list.len() - 1];
        let sin_max = thetas.iter().fold(T::zero(), |m, t| m.max(t.sin().abs()));
        if r_max * sin_max * sigma.abs() > T::lit(OVERFLOW_EXPONENT) {
            return Err(Error::invalid(
                "r_list",
                format!("r * |sin theta| * sigma exceeds {OVERFLOW_EXPONENT}; shrink the radii"),
            ));
        }
        let values = thetas.iter().map(|&t| ray(&f, t, &r_list)).collect();
        Ok(EntireProbe {
            f,
            r_list,
            thetas,
            values,
        })
    }

    pub fn r_list(&self) -> &[T] {
        &self.r_list
    }

    pub fn thetas(&self) -> &[T] {
        &self.thetas
    }

    pub fn values(&self) -> &[Vec<Complex<T>>] {
        &self.values
    }

    /// Indicator estimate on the `i`-th ray of the grid.
    pub fn indicator_at(&self, i: usize) -> Result<IndicatorFit<T>> {
        match fit_ray(&self.r_list, &self.values[i])? {
            Some((h, residual)) => Ok(IndicatorFit {
                theta: self.thetas[i],
                h,
                residual,
            }),
            None => jittered(&self.f, self.thetas[i], &self.r_list),
        }
    }

    /// All indicator estimates, one per ray.
    pub fn indicators(&self) -> Result<Vec<IndicatorFit<T>>> {
        (0..self.thetas.len()).map(|i| self.indicator_at(i)).collect()
    }

    /// Maximum of the indicator over the grid.
    pub fn function_type(&self) -> Result<T> {
        Ok(self
            .indicators()?
            .iter()
            .fold(T::neg_infinity(), |m, fit| m.max(fit.h)))
    }
}

fn ray<T: Real, F: Fn(Complex<T>) -> Complex<T> + Sync>(f: &F, theta: T, r_list: &[T]) -> Vec<Complex<T>> {
    let dir = cplx(theta.cos(), theta.sin());
    r_list.par_iter().map(|&r| f(dir * r)).collect()
}

/// `None` when the ray hits a zero.
fn fit_ray<T: Real>(r_list: &[T], values: &[Complex<T>]) -> Result<Option<(T, T)>> {
    if let Some(v) = values.iter().find(|v| !is_finite_c(**v)) {
        return Err(Error::NonFinite {
            context: format!("ray evaluation ({v}); reduce the radii"),
        });
    }
    let start = r_list.len() / 2;
    let r = &r_list[start..];
    let mut y = Vec::with_capacity(r.len());
    for v in &values[start..] {
        let m = v.norm();
        if m == T::zero() {
            return Ok(None);
        }
        y.push(m.ln());
    }
    let (slope, _, residual) = line_fit(r, &y);
    Ok(Some((slope, residual)))
}

fn jittered<T: Real, F: Fn(Complex<T>) -> Complex<T> + Sync>(f: &F, theta: T, r_list: &[T]) -> Result<IndicatorFit<T>> {
    for k in 1..=JITTER_RETRIES {
        let t = theta + T::lit(THETA_JITTER) * T::from_count(k);
        if let Some((h, residual)) = fit_ray(r_list, &ray(f, t, r_list))? {
            return Ok(IndicatorFit { theta: t, h, residual });
        }
    }
    Err(Error::NonFinite {
        context: format!("every jittered ray near theta = {theta} hits a zero"),
    })
}

/// Indicator `h_f(theta)`: slope of `ln |f(r e^{i theta})|` against `r` over
/// the upper half of `r_list`.
pub fn indicator<T, F>(f: &F, theta: T, r_list: &[T]) -> Result<IndicatorFit<T>>
where
    T: Real,
    F: Fn(Complex<T>) -> Complex<T> + Sync,
{
    check_radii(r_list)?;
    match fit_ray(r_list, &ray(f, theta, r_list))? {
        Some((h, residual)) => Ok(IndicatorFit { theta, h, residual }),
        None => jittered(f, theta, r_list),
    }
}

/// Type of `f`: the largest indicator over `thetas`.
pub fn function_type<T, F>(f: &F, thetas: &[T], r_list: &[T]) -> Result<T>
where
    T: Real,
    F: Fn(Complex<T>) -> Complex<T> + Sync,
{
    if thetas.is_empty() {
        return Err(Error::invalid("theta_list", "at least one angle is required"));
    }
    thetas
        .iter()
        .map(|&t| indicator(f, t, r_list).map(|fit| fit.h))
        .try_fold(T::neg_infinity(), |m, h| h.map(|h| m.max(h)))
}

/// Zeros ordered by modulus, complete inside `|z| <= radius`.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroSet<T> {
    zeros: Vec<Complex<T>>,
    radius: T,
}

impl<T: Real> ZeroSet<T> {
    /// Sorts `zeros` by modulus and drops those beyond `radius`.
    pub fn new(mut zeros: Vec<Complex<T>>, radius: T) -> Result<Self> {
        if !(radius > T::zero()) {
            return Err(Error::invalid("radius", "must be positive"));
        }
        if zeros.iter().any(|z| !is_finite_c(*z)) {
            return Err(Error::invalid("zeros", "non-finite zero"));
        }
        zeros.retain(|z| z.norm() <= radius);
        zeros.sort_by(|a, b| {
            a.norm()
                .partial_cmp(&b.norm())
                .expect("finite zeros")
                .then(a.re.partial_cmp(&b.re).expect("finite zeros"))
                .then(a.im.partial_cmp(&b.im).expect("finite zeros"))
        });
        Ok(ZeroSet { zeros, radius })
    }

    /// Collects the zeros of `f` in the strip `|Im z| <= height`.
    pub fn collect<F>(f: &F, radius: T, height: T, real_on_axis: bool) -> Result<Self>
    where
        F: Fn(Complex<T>) -> Complex<T> + Sync,
    {
        let opts = StripOptions::new(radius).height(height).real_on_axis(real_on_axis);
        ZeroSet::new(collect_zeros_strip(f, &opts)?, radius)
    }

    pub fn zeros(&self) -> &[Complex<T>] {
        &self.zeros
    }

    pub fn radius(&self) -> T {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.zeros.len()
    }

    pub fn is_empty(&self) -> bool {
        self.zeros.is_empty()
    }

    /// The subset with `|z| <= radius`.
    pub fn truncated(&self, radius: T) -> Result<Self> {
        if radius > self.radius {
            return Err(Error::invalid("radius", "exceeds the collection radius"));
        }
        ZeroSet::new(self.zeros.clone(), radius)
    }

    /// `N(r)`: zeros with `|z| <= r`.
    pub fn count_within(&self, r: T) -> usize {
        self.zeros.partition_point(|z| z.norm() <= r)
    }
}

/// `N(r) / r`.
pub fn zero_density<T: Real>(zs: &ZeroSet<T>, r: T) -> Result<T> {
    if !(r > T::zero()) {
        return Err(Error::invalid("r", "must be positive"));
    }
    if r > zs.radius() {
        return Err(Error::invalid("r", "exceeds the radius the zero set is complete to"));
    }
    Ok(T::from_count(zs.count_within(r)) / r)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupportEstimate<T> {
    pub width: T,
    /// Radii actually used (contours move off zeros).
    pub radii: Vec<T>,
    pub counts: Vec<usize>,
}

/// Width of the convex hull of the support of `psi`, where `f` is its
/// transform: `pi` times the slope of `N(r)` against `r` over
/// `r in {0.5, 0.75, 1} r_max`.
pub fn effective_support_width<T, F>(f: &F, r_max: T) -> Result<SupportEstimate<T>>
where
    T: Real,
    F: Fn(Complex<T>) -> Complex<T> + Sync,
{
    if !(r_max > T::zero()) {
        return Err(Error::invalid("r_max", "must be positive"));
    }
    let mut radii = Vec::with_capacity(3);
    let mut counts = Vec::with_capacity(3);
    for frac in [0.5, 0.75, 1.0] {
        let c = count_zeros_disk(f, r_max * T::lit(frac), COUNT_SAMPLES)?;
        radii.push(c.radius);
        counts.push(c.count);
    }
    let n: Vec<T> = counts.iter().map(|&c| T::from_count(c)).collect();
    let (slope, _, _) = line_fit(&radii, &n);
    Ok(SupportEstimate {
        width: T::PI() * slope,
        radii,
        counts,
    })
}

fn reject_origin<T: Real>(zs: &ZeroSet<T>) -> Result<()> {
    if zs.zeros().iter().any(|z| z.norm() == T::zero()) {
        return Err(Error::invalid(
            "zeros",
            "a zero at the origin has no factor 1 - rho/alpha; divide it out first",
        ));
    }
    Ok(())
}

/// `c * prod (1 - rho/alpha_k)` over the set, factors taken in order of
/// increasing modulus.
pub fn cartwright_product<T: Real>(zs: &ZeroSet<T>, c: Complex<T>, rho: Complex<T>) -> Result<Complex<T>> {
    reject_origin(zs)?;
    let one = cplx(T::one(), T::zero());
    let p = zs.zeros().iter().fold(c, |acc, &a| acc * (one - rho / a));
    if is_finite_c(p) {
        Ok(p)
    } else {
        Err(Error::Range {
            re: rho.re.as_f64(),
            im: rho.im.as_f64(),
            hint: "product overflows; use cartwright_log".into(),
        })
    }
}

/// `ln c + sum ln(1 - rho/alpha_k)`: real part is `ln |P|`, imaginary part
/// an (unreduced) argument.
pub fn cartwright_log<T: Real>(zs: &ZeroSet<T>, c: Complex<T>, rho: Complex<T>) -> Result<Complex<T>> {
    reject_origin(zs)?;
    if c.norm() == T::zero() {
        return Err(Error::Undefined("logarithm of a zero constant".into()));
    }
    let one = cplx(T::one(), T::zero());
    Ok(zs.zeros().iter().fold(c.ln(), |acc, &a| acc + (one - rho / a).ln()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    type C64 = Complex<f64>;

    fn radii() -> Vec<f64> {
        (1..=10).map(|k| 5.0 * k as f64).collect()
    }

    #[test]
    fn sine_indicator_and_type() {
        let f = |z: C64| (z * PI).sin();
        let h = indicator(&f, PI / 2.0, &radii()).unwrap();
        assert!((h.h - PI).abs() < 0.02 * PI);
        let thetas: Vec<f64> = (0..16).map(|k| k as f64 * PI / 8.0).collect();
        let s = function_type(&f, &thetas, &radii()).unwrap();
        assert!((s - PI).abs() < 0.02 * PI);
    }

    #[test]
    fn exponential_indicator_is_negative() {
        let f = |z: C64| (C64::i() * z).exp();
        let h = indicator(&f, PI / 2.0, &radii()).unwrap();
        assert!((h.h + 1.0).abs() < 0.02);
    }

    #[test]
    fn ray_through_zeros_is_jittered() {
        // vanishes identically on the positive real axis
        let f = |z: C64| (z - z.conj()) * z.exp();
        let r: Vec<f64> = (1..=8).map(|k| k as f64).collect();
        let fit = indicator(&f, 0.0, &r).unwrap();
        assert!(fit.theta > 0.0 && fit.h.is_finite());
    }

    #[test]
    fn overflow_guard() {
        let f = |z: C64| (z * PI).sin();
        let r: Vec<f64> = (1..=10).map(|k| 30.0 * k as f64).collect();
        assert!(EntireProbe::new(f, r, vec![PI / 2.0], PI).is_err());
    }

    #[test]
    fn densities_of_explicit_sets() {
        let ints: Vec<C64> = (-300..=300).map(|k| C64::new(k as f64, 0.0)).collect();
        let zs = ZeroSet::new(ints, 300.0).unwrap();
        assert!((zero_density(&zs, 100.5).unwrap() - 201.0 / 100.5).abs() < 1e-12);
        let evens: Vec<C64> = (1..=100).map(|k| C64::new(2.0 * k as f64, 0.0)).collect();
        let zs = ZeroSet::new(evens, 200.0).unwrap();
        assert!((zero_density(&zs, 100.0).unwrap() - 0.5).abs() < 1e-12);
        assert!(zero_density(&zs, 250.0).is_err());
    }

    #[test]
    fn euler_product() {
        let mut zeros = Vec::new();
        for k in 1..=2000 {
            zeros.push(C64::new(k as f64, 0.0));
            zeros.push(C64::new(-(k as f64), 0.0));
        }
        let zs = ZeroSet::new(zeros, 2000.0).unwrap();
        let p = cartwright_product(&zs, C64::new(1.0, 0.0), C64::new(0.5, 0.0)).unwrap();
        assert!((p.re - 2.0 / PI).abs() < 1e-4);
        let lp = cartwright_log(&zs, C64::new(1.0, 0.0), C64::new(0.5, 0.0)).unwrap();
        assert!((lp.exp() - p).norm() < 1e-12);
        let empty = ZeroSet::new(Vec::new(), 1.0).unwrap();
        assert_eq!(cartwright_product(&empty, C64::new(3.7, 0.0), C64::new(2.0, 1.0)).unwrap(), C64::new(3.7, 0.0));
    }

    #[test]
    fn origin_zero_is_rejected() {
        let zs = ZeroSet::new(vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0)], 2.0).unwrap();
        assert!(cartwright_product(&zs, C64::new(1.0, 0.0), C64::new(0.5, 0.0)).is_err());
    }

    #[test]
    fn support_of_half_interval() {
        // transform of the indicator of [0, pi/2], up to a constant
        let f = |z: C64| {
            if z.norm() < 1e-12 {
                C64::new(PI / 2.0, 0.0)
            } else {
                (C64::new(1.0, 0.0) - (C64::new(0.0, -PI / 2.0) * z).exp()) / (C64::i() * z)
            }
        };
        let est = effective_support_width(&f, 60.0).unwrap();
        assert!((est.width - PI / 2.0).abs() < 0.05 * PI / 2.0, "{:?}", est);
    }
}
