//! Potentials, frozen-argument configurations and the finite Fourier
//! (Paley-Wiener) transforms that the rest of the crate consumes.
//!
//! Transform convention: `F(rho) = (1/2pi) * int_{-pi}^{pi} exp(-i rho t) psi(t) dt`,
//! with a potential on `(0, pi)` extended by zero to `[-pi, 0)`. Under this
//! convention `F(k)` is the k-th Fourier coefficient and
//! `sum_k |c_k|^2 = (1/2pi) * int_0^pi |q|^2`.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::{breakpoints, GaussLegendre, DEFAULT_ORDER, MAX_PANEL_PHASE};
use crate::scalar::Real;

/// Smallest admissible sample grid.
pub const MIN_GRID: usize = 16;

/// Interpolation rule between sample nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Interpolation {
    #[default]
    Linear,
    /// Natural cubic spline.
    Cubic,
}

/// A real function with compact support that can be integrated panel-wise.
///
/// `breakpoints` lists the points where the function may be non-smooth,
/// including both support ends; quadrature panels never straddle them.
pub trait Profile<T: Real>: Sync {
    fn eval(&self, t: T) -> T;
    fn breakpoints(&self) -> Vec<T>;

    fn support(&self) -> (T, T) {
        let b = self.breakpoints();
        (b[0], b[b.len() - 1])
    }
}

impl<T: Real, P: Profile<T> + ?Sized> Profile<T> for &P {
    fn eval(&self, t: T) -> T {
        (**self).eval(t)
    }
    fn breakpoints(&self) -> Vec<T> {
        (**self).breakpoints()
    }
}

/// Real potential on `[0, pi]`, stored as samples on `x_j = j*pi/M`.
#[derive(Debug, Clone, PartialEq)]
pub struct Potential<T> {
    samples: Vec<T>,
    nodes: Vec<T>,
    step: T,
    interp: Interpolation,
    /// Second derivatives at the nodes, present for cubic interpolation.
    curvature: Vec<T>,
    fourier: Option<FourierCoefficients<T>>,
}

impl<T: Real> Potential<T> {
    /// Linear-interpolated potential from `M + 1` samples.
    pub fn from_samples(values: Vec<T>, m: usize) -> Result<Self> {
        if m < MIN_GRID {
            return Err(Error::invalid("M", format!("grid resolution {m} is below {MIN_GRID}")));
        }
        if values.len() != m + 1 {
            return Err(Error::invalid(
                "values",
                format!("expected M + 1 = {} samples, got {}", m + 1, values.len()),
            ));
        }
        if let Some(j) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid(format!("values[{j}]"), "sample is not finite"));
        }
        let step = T::PI() / T::from_count(m);
        let nodes = (0..=m).map(|j| T::from_count(j) * step).collect::<Vec<_>>();
        let mut nodes = nodes;
        nodes[m] = T::PI();
        Ok(Self {
            samples: values,
            nodes,
            step,
            interp: Interpolation::Linear,
            curvature: Vec::new(),
            fourier: None,
        })
    }

    /// Samples `f` on the `M + 1` nodes.
    pub fn from_fn(m: usize, f: impl Fn(T) -> T) -> Result<Self> {
        let step = T::PI() / T::from_count(m);
        let values = (0..=m)
            .map(|j| if j == m { f(T::PI()) } else { f(T::from_count(j) * step) })
            .collect();
        Self::from_samples(values, m)
    }

    /// Potential `q(x) = Re sum_k c_k exp(i k x)` sampled on `M + 1` nodes; the
    /// coefficients are kept alongside the samples.
    pub fn from_fourier(coeffs: FourierCoefficients<T>, m: usize) -> Result<Self> {
        coeffs.check_conjugate_symmetry()?;
        let kmax = coeffs.band_limit() as i64;
        let eval = |x: T| {
            let mut acc = T::zero();
            for k in -kmax..=kmax {
                let c = coeffs.get(k);
                let ph = T::lit(k as f64) * x;
                acc = acc + c.re * ph.cos() - c.im * ph.sin();
            }
            acc
        };
        let mut q = Self::from_fn(m, eval)?;
        q.fourier = Some(coeffs);
        Ok(q)
    }

    pub fn zero(m: usize) -> Self {
        Self::from_samples(vec![T::zero(); m + 1], m).expect("valid zero potential")
    }

    /// Switches the interpolation rule, rebuilding spline data if needed.
    pub fn with_interpolation(mut self, interp: Interpolation) -> Self {
        self.interp = interp;
        self.curvature = match interp {
            Interpolation::Linear => Vec::new(),
            Interpolation::Cubic => natural_spline_curvature(&self.samples, self.step),
        };
        self
    }

    pub fn grid(&self) -> usize {
        self.samples.len() - 1
    }

    pub fn samples(&self) -> &[T] {
        &self.samples
    }

    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    pub fn interpolation(&self) -> Interpolation {
        self.interp
    }

    pub fn fourier(&self) -> Option<&FourierCoefficients<T>> {
        self.fourier.as_ref()
    }

    /// Value at `x`; zero outside `[0, pi]`.
    pub fn eval(&self, x: T) -> T {
        let m = self.grid();
        if x < T::zero() || x > T::PI() || x.is_nan() {
            return T::zero();
        }
        let pos = x / self.step;
        let j = pos.floor().to_usize().unwrap_or(0).min(m - 1);
        let t = x - self.nodes[j];
        let h = self.nodes[j + 1] - self.nodes[j];
        let (y0, y1) = (self.samples[j], self.samples[j + 1]);
        match self.interp {
            Interpolation::Linear => y0 + (y1 - y0) * (t / h),
            Interpolation::Cubic => {
                let (m0, m1) = (self.curvature[j], self.curvature[j + 1]);
                let a = (h - t) / h;
                let b = t / h;
                let six = T::lit(6.0);
                a * y0 + b * y1 + ((a * a * a - a) * m0 + (b * b * b - b) * m1) * h * h / six
            }
        }
    }

    /// `self + t * (other - self)` on the common grid.
    pub fn lerp(&self, other: &Self, t: T) -> Result<Self> {
        if other.grid() != self.grid() {
            return Err(Error::invalid("potentials", "grids differ; cannot interpolate between potentials"));
        }
        let values = self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(a, b)| *a + t * (*b - *a))
            .collect();
        Ok(Self::from_samples(values, self.grid())?.with_interpolation(self.interp))
    }

    pub fn scaled(&self, t: T) -> Self {
        let mut q = self.clone();
        for v in &mut q.samples {
            *v = *v * t;
        }
        if !q.curvature.is_empty() {
            for v in &mut q.curvature {
                *v = *v * t;
            }
        }
        q.fourier = None;
        q
    }

    pub fn sup_norm(&self) -> T {
        self.samples.iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }
}

impl<T: Real> Profile<T> for Potential<T> {
    fn eval(&self, t: T) -> T {
        Potential::eval(self, t)
    }
    fn breakpoints(&self) -> Vec<T> {
        self.nodes.clone()
    }
}

/// `q1 - q2` for potentials that may live on different grids.
#[derive(Debug, Clone, Copy)]
pub struct Difference<'a, T> {
    pub q1: &'a Potential<T>,
    pub q2: &'a Potential<T>,
}

impl<T: Real> Profile<T> for Difference<'_, T> {
    fn eval(&self, t: T) -> T {
        self.q1.eval(t) - self.q2.eval(t)
    }
    fn breakpoints(&self) -> Vec<T> {
        merge_sorted(self.q1.nodes(), self.q2.nodes())
    }
}

/// `f` restricted to `[lo, hi]`, zero elsewhere. The indicator function of
/// an interval is `Window::indicator(lo, hi)`.
#[derive(Clone, Copy)]
pub struct Window<T, F> {
    pub lo: T,
    pub hi: T,
    pub f: F,
}

impl<T: Real> Window<T, fn(T) -> T> {
    pub fn indicator(lo: T, hi: T) -> Self {
        fn one<T: Real>(_: T) -> T {
            T::one()
        }
        Window { lo, hi, f: one::<T> }
    }
}

impl<T: Real, F: Fn(T) -> T + Sync> Profile<T> for Window<T, F> {
    fn eval(&self, t: T) -> T {
        if t < self.lo || t > self.hi {
            T::zero()
        } else {
            (self.f)(t)
        }
    }
    fn breakpoints(&self) -> Vec<T> {
        vec![self.lo, self.hi]
    }
}

/// Sorted union of two sorted node lists, with near-duplicates collapsed.
pub(crate) fn merge_sorted<T: Real>(a: &[T], b: &[T]) -> Vec<T> {
    let mut out: Vec<T> = a.iter().chain(b).copied().collect();
    out.sort_by(|x, y| x.partial_cmp(y).expect("finite nodes"));
    let eps = T::lit(1e-13);
    out.dedup_by(|x, y| (*x - *y).abs() <= eps);
    out
}

/// Which derivative a boundary condition constrains: `y(.)` or `y'(.)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundaryOrder {
    Value,
    Derivative,
}

impl BoundaryOrder {
    pub fn index(self) -> u8 {
        match self {
            BoundaryOrder::Value => 0,
            BoundaryOrder::Derivative => 1,
        }
    }
}

impl TryFrom<u8> for BoundaryOrder {
    type Error = Error;
    fn try_from(v: u8) -> Result<Self> {
        match v {
            0 => Ok(BoundaryOrder::Value),
            1 => Ok(BoundaryOrder::Derivative),
            _ => Err(Error::invalid("alpha/beta", format!("boundary index must be 0 or 1, got {v}"))),
        }
    }
}

/// Frozen points `0 < a_1 < ... < a_N < pi` and the boundary pair `(alpha, beta)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemConfig<T> {
    frozen: Vec<T>,
    alpha: BoundaryOrder,
    beta: BoundaryOrder,
}

impl<T: Real> ProblemConfig<T> {
    pub fn new(frozen: Vec<T>, alpha: u8, beta: u8) -> Result<Self> {
        let alpha = BoundaryOrder::try_from(alpha).map_err(|_| Error::invalid("problem.alpha", "must be 0 or 1"))?;
        let beta = BoundaryOrder::try_from(beta).map_err(|_| Error::invalid("problem.beta", "must be 0 or 1"))?;
        if frozen.is_empty() {
            return Err(Error::invalid("problem.frozen", "at least one frozen point is required"));
        }
        for (i, a) in frozen.iter().enumerate() {
            if !a.is_finite() || *a <= T::zero() || *a >= T::PI() {
                return Err(Error::invalid(format!("problem.frozen[{i}]"), "frozen point must lie strictly inside (0, pi)"));
            }
            if i > 0 && frozen[i - 1] >= *a {
                return Err(Error::invalid(format!("problem.frozen[{i}]"), "frozen points must be strictly increasing"));
            }
        }
        Ok(Self { frozen, alpha, beta })
    }

    pub fn frozen(&self) -> &[T] {
        &self.frozen
    }

    pub fn n(&self) -> usize {
        self.frozen.len()
    }

    pub fn alpha(&self) -> BoundaryOrder {
        self.alpha
    }

    pub fn beta(&self) -> BoundaryOrder {
        self.beta
    }

    pub fn last_frozen(&self) -> T {
        self.frozen[self.frozen.len() - 1]
    }

    /// Same frozen points with another boundary pair.
    pub fn with_boundary(&self, alpha: u8, beta: u8) -> Result<Self> {
        Self::new(self.frozen.clone(), alpha, beta)
    }
}

/// Fourier coefficients `c_k`, `k in [-K, K]`, stored from `-K` upwards.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierCoefficients<T> {
    band_limit: usize,
    coeffs: Vec<Complex<T>>,
}

impl<T: Real> FourierCoefficients<T> {
    pub fn new(band_limit: usize, coeffs: Vec<Complex<T>>) -> Result<Self> {
        if coeffs.len() != 2 * band_limit + 1 {
            return Err(Error::invalid(
                "coeffs",
                format!("expected 2K + 1 = {} coefficients, got {}", 2 * band_limit + 1, coeffs.len()),
            ));
        }
        if let Some(j) = coeffs.iter().position(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::invalid(format!("coeffs[{j}]"), "coefficient is not finite"));
        }
        Ok(Self { band_limit, coeffs })
    }

    pub fn band_limit(&self) -> usize {
        self.band_limit
    }

    /// Coefficient `c_k`; zero outside the band.
    pub fn get(&self, k: i64) -> Complex<T> {
        let kk = k + self.band_limit as i64;
        if kk < 0 || kk as usize >= self.coeffs.len() {
            Complex::new(T::zero(), T::zero())
        } else {
            self.coeffs[kk as usize]
        }
    }

    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    pub fn l2_norm(&self) -> T {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<T>().sqrt()
    }

    /// `c_{-k} = conj(c_k)` to within `1e-12` relative.
    pub fn check_conjugate_symmetry(&self) -> Result<()> {
        let scale = self.coeffs.iter().fold(T::zero(), |m, c| m.max(c.norm()));
        let tol = T::lit(1e-12) * scale.max(T::one());
        for k in 0..=self.band_limit as i64 {
            if (self.get(-k) - self.get(k).conj()).norm() > tol {
                return Err(Error::invalid(
                    format!("coeffs[{}]", k + self.band_limit as i64),
                    "coefficients of a real potential must satisfy c(-k) = conj(c(k))",
                ));
            }
        }
        Ok(())
    }
}

/// Convenience constructor mirroring the ingestion path.
pub fn potential_from_samples<T: Real>(values: Vec<T>, m: usize) -> Result<Potential<T>> {
    Potential::from_samples(values, m)
}

/// `c_k = (1/2pi) int_0^pi exp(-i k t) q(t) dt` for `|k| <= K`; the negative
/// half is filled by conjugation so the symmetry holds bit-for-bit.
pub fn fourier_coefficients<T: Real>(q: &impl Profile<T>, band_limit: usize) -> Result<FourierCoefficients<T>> {
    if band_limit < 1 {
        return Err(Error::invalid("K", "band limit must be at least 1"));
    }
    let rule = GaussLegendre::new(DEFAULT_ORDER);
    let mut coeffs = vec![Complex::new(T::zero(), T::zero()); 2 * band_limit + 1];
    for k in 0..=band_limit {
        let c = transform_with(q, Complex::new(T::from_count(k), T::zero()), &rule, T::lit(MAX_PANEL_PHASE));
        coeffs[band_limit + k] = c;
        coeffs[band_limit - k] = c.conj();
    }
    // c_0 must be real for a real profile
    coeffs[band_limit].im = T::zero();
    FourierCoefficients::new(band_limit, coeffs)
}

/// Checked evaluation of `F(rho)`: the panel rule is refined until two
/// successive estimates agree to `1e-12` of the absolute integrand mass.
pub fn paley_wiener_transform<T: Real>(psi: &impl Profile<T>, rho: Complex<T>) -> Result<Complex<T>> {
    if !(rho.re.is_finite() && rho.im.is_finite()) {
        return Err(Error::invalid("rho", "transform argument must be finite"));
    }
    let rule = GaussLegendre::new(DEFAULT_ORDER);
    let mut phase = T::lit(MAX_PANEL_PHASE);
    let mut prev = transform_with(psi, rho, &rule, phase);
    let mass = transform_mass(psi, rho, &rule);
    let max_refinements = 6;
    let mut diff = T::infinity();
    for _ in 0..max_refinements {
        phase = phase * T::lit(0.5);
        let next = transform_with(psi, rho, &rule, phase);
        diff = (next - prev).norm();
        if diff <= T::lit(1e-12) * mass || mass == T::zero() {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::Quadrature {
        refinements: max_refinements,
        estimate: diff.as_f64(),
    })
}

/// Fast unchecked transform with the default panel rule.
#[derive(Debug, Clone)]
pub struct PaleyWiener<T, P> {
    psi: P,
    rule: GaussLegendre<T>,
}

impl<T: Real, P: Profile<T>> PaleyWiener<T, P> {
    pub fn new(psi: P) -> Self {
        Self {
            psi,
            rule: GaussLegendre::new(DEFAULT_ORDER),
        }
    }

    pub fn eval(&self, rho: Complex<T>) -> Complex<T> {
        transform_with(&self.psi, rho, &self.rule, T::lit(MAX_PANEL_PHASE))
    }

    pub fn profile(&self) -> &P {
        &self.psi
    }
}

/// `F(rho)` with the composite rule at the given panel phase.
pub(crate) fn transform_with<T: Real>(
    psi: &impl Profile<T>,
    rho: Complex<T>,
    rule: &GaussLegendre<T>,
    max_phase: T,
) -> Complex<T> {
    let breaks = clipped_breaks(psi);
    let neg_i_rho = Complex::new(rho.im, -rho.re);
    let v: Complex<T> = rule.composite(&breaks, rho.norm(), max_phase, |t| (neg_i_rho * t).exp() * psi.eval(t));
    v * (T::one() / (T::lit(2.0) * T::PI()))
}

/// `(1/2pi) int |exp(-i rho t) psi(t)| dt`, the scale against which
/// cancellation in the transform is judged.
fn transform_mass<T: Real>(psi: &impl Profile<T>, rho: Complex<T>, rule: &GaussLegendre<T>) -> T {
    let breaks = clipped_breaks(psi);
    let m: T = rule.composite(&breaks, rho.norm(), T::lit(MAX_PANEL_PHASE), |t| {
        (rho.im * t).exp() * psi.eval(t).abs()
    });
    m / (T::lit(2.0) * T::PI())
}

fn clipped_breaks<T: Real>(psi: &impl Profile<T>) -> Vec<T> {
    let b = psi.breakpoints();
    let (lo, hi) = (b[0], b[b.len() - 1]);
    breakpoints(&b, lo.max(-T::PI()), hi.min(T::PI()))
}

/// Second derivatives of the natural cubic spline through equally spaced samples.
fn natural_spline_curvature<T: Real>(y: &[T], h: T) -> Vec<T> {
    let n = y.len();
    let mut m = vec![T::zero(); n];
    if n < 3 {
        return m;
    }
    // Thomas algorithm for (h/6, 2h/3, h/6) m = second differences / h
    let six = T::lit(6.0);
    let mut c_prime = vec![T::zero(); n];
    let mut d_prime = vec![T::zero(); n];
    let diag = T::lit(4.0);
    for i in 1..n - 1 {
        let rhs = six * (y[i + 1] - T::lit(2.0) * y[i] + y[i - 1]) / (h * h);
        let denom = diag - if i > 1 { c_prime[i - 1] } else { T::zero() };
        c_prime[i] = T::one() / denom;
        d_prime[i] = (rhs - if i > 1 { d_prime[i - 1] } else { T::zero() }) / denom;
    }
    for i in (1..n - 1).rev() {
        let next = if i + 1 < n - 1 { m[i + 1] } else { T::zero() };
        m[i] = d_prime[i] - c_prime[i] * next;
    }
    m
}

/// Potential specification as found in JSON configuration files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PotentialSpec {
    Samples {
        #[serde(rename = "M")]
        m: usize,
        values: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        interp: Option<Interpolation>,
    },
    Fourier {
        #[serde(rename = "K")]
        k: usize,
        coeffs: Vec<[f64; 2]>,
    },
}

impl PotentialSpec {
    /// Builds the potential; `grid` is the sample resolution used for
    /// Fourier-specified potentials.
    pub fn build(&self, grid: usize) -> Result<Potential<f64>> {
        match self {
            PotentialSpec::Samples { m, values, interp } => {
                Ok(Potential::from_samples(values.clone(), *m)?.with_interpolation(interp.unwrap_or_default()))
            }
            PotentialSpec::Fourier { k, coeffs } => {
                let c = coeffs.iter().map(|[re, im]| Complex::new(*re, *im)).collect();
                Potential::from_fourier(FourierCoefficients::new(*k, c)?, grid)
            }
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}
