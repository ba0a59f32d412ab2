//! Characteristic determinants of the frozen-argument problem
//!
//! ```text
//! -y'' + q(x) * sum_i y(a_i) = rho^2 y,   y^(alpha)(0) = y^(beta)(pi) = 0
//! ```
//!
//! With `C(x) = sin(rho x)/rho` (alpha = 0) or `cos(rho x)` (alpha = 1) and
//! `v(x) = int_0^x sin(rho (x - t))/rho q(t) dt`, the determinant reduces to
//!
//! ```text
//! Delta = C^(beta)(pi) (1 - sum_i v(a_i)) + (sum_i C(a_i)) v^(beta)(pi)
//! ```
//!
//! Both the bordered `(N+1) x (N+1)` determinant and this reduced form are
//! available; they share the kernel integrals and are checked against each
//! other in the tests.

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::model::{merge_sorted, Difference, Potential, ProblemConfig, Profile};
use crate::quad::{breakpoints, panel_count, GaussLegendre, DEFAULT_ORDER, MAX_PANEL_PHASE};
use crate::model::BoundaryOrder;
use crate::scalar::{is_finite_c, Real};

/// Below this modulus `sin(rho x)/rho` is evaluated from its Taylor series.
pub const RHO_MIN: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Method {
    #[default]
    Determinant,
    ClosedForm,
    /// `C^(beta)(pi)` plus the Green-kernel form of the potential term; free
    /// of cancellation off the real axis.
    Green,
}

/// `sin(rho x) / rho`, continuous through `rho = 0`.
#[inline]
pub fn sin_over<T: Real>(rho: Complex<T>, x: T) -> Complex<T> {
    if rho.norm() < T::lit(RHO_MIN) {
        // x - (rho x)^2 x/3! + (rho x)^4 x/5! - (rho x)^6 x/7! + (rho x)^8 x/9!
        let z2 = rho * rho * (x * x);
        let mut term = Complex::new(x, T::zero());
        let mut acc = term;
        for k in 1..5 {
            let d = T::from_count((2 * k) * (2 * k + 1));
            term = -term * z2 / d;
            acc = acc + term;
        }
        acc
    } else {
        (rho * x).sin() / rho
    }
}

/// `C(x)`: the solution of `y'' = -rho^2 y` with the alpha initial condition.
#[inline]
fn basis<T: Real>(rho: Complex<T>, x: T, alpha: BoundaryOrder) -> Complex<T> {
    match alpha {
        BoundaryOrder::Value => sin_over(rho, x),
        BoundaryOrder::Derivative => (rho * x).cos(),
    }
}

/// `C^(beta)(pi)`.
#[inline]
fn basis_end<T: Real>(rho: Complex<T>, alpha: BoundaryOrder, beta: BoundaryOrder) -> Complex<T> {
    let pi = T::PI();
    match (alpha, beta) {
        (BoundaryOrder::Value, BoundaryOrder::Value) => sin_over(rho, pi),
        (BoundaryOrder::Value, BoundaryOrder::Derivative) => (rho * pi).cos(),
        (BoundaryOrder::Derivative, BoundaryOrder::Value) => (rho * pi).cos(),
        (BoundaryOrder::Derivative, BoundaryOrder::Derivative) => -rho * (rho * pi).sin(),
    }
}

/// Kernel integrals of one profile at one `rho`.
struct Kernels<T> {
    /// `v(a_i)` per frozen point.
    at_frozen: Vec<Complex<T>>,
    /// `v^(beta)(pi)`.
    at_end: Complex<T>,
}

/// `int_0^x sin(rho (x - t))/rho q(t) dt` on panels aligned with the profile's nodes.
fn kernel_value<T: Real>(
    q: &impl Profile<T>,
    nodes: &[T],
    x: T,
    rho: Complex<T>,
    rule: &GaussLegendre<T>,
) -> Complex<T> {
    let breaks = breakpoints(nodes, T::zero(), x);
    rule.composite(&breaks, rho.norm(), T::lit(MAX_PANEL_PHASE), |t| sin_over(rho, x - t) * q.eval(t))
}

/// `int_0^pi cos(rho (pi - t)) q(t) dt`.
fn kernel_derivative<T: Real>(q: &impl Profile<T>, nodes: &[T], rho: Complex<T>, rule: &GaussLegendre<T>) -> Complex<T> {
    let pi = T::PI();
    let breaks = breakpoints(nodes, T::zero(), pi);
    rule.composite(&breaks, rho.norm(), T::lit(MAX_PANEL_PHASE), |t| (rho * (pi - t)).cos() * q.eval(t))
}

fn kernels<T: Real>(q: &impl Profile<T>, config: &ProblemConfig<T>, rho: Complex<T>, rule: &GaussLegendre<T>) -> Kernels<T> {
    if rho.norm() >= T::one() {
        return kernels_sweep(q, config, rho, rule);
    }
    let nodes = q.breakpoints();
    let at_frozen = config
        .frozen()
        .iter()
        .map(|&a| kernel_value(q, &nodes, a, rho, rule))
        .collect();
    let at_end = match config.beta() {
        BoundaryOrder::Value => kernel_value(q, &nodes, T::PI(), rho, rule),
        BoundaryOrder::Derivative => kernel_derivative(q, &nodes, rho, rule),
    };
    Kernels { at_frozen, at_end }
}

/// Integrals of `q` against `e^{-i rho t}` and `e^{i rho t}` over each
/// interval `[stops[j-1], stops[j]]` (with `stops[-1] = 0`), from one pass
/// over panels aligned with the profile's nodes.
fn segment_transforms<T: Real>(
    q: &impl Profile<T>,
    stops: &[T],
    rho: Complex<T>,
    rule: &GaussLegendre<T>,
) -> Vec<(Complex<T>, Complex<T>)> {
    let zero = Complex::<T>::zero();
    let i = Complex::<T>::i();
    let breaks = merge_sorted(&breakpoints(&q.breakpoints(), T::zero(), T::PI()), stops);
    let max_phase = T::lit(MAX_PANEL_PHASE);
    let freq = rho.norm();
    let (mut a, mut b) = (zero, zero);
    let mut segments = Vec::with_capacity(stops.len());
    let mut next = 0;
    let mut offs: Vec<(Complex<T>, Complex<T>)> = Vec::with_capacity(rule.order());
    let mut offs_half = -T::one();
    for w in breaks.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        if hi > lo {
            let panels = panel_count(hi - lo, freq, max_phase, 1);
            let step = (hi - lo) / T::from_count(panels);
            let half = step * T::lit(0.5);
            if half != offs_half {
                offs.clear();
                offs.extend(rule.nodes().iter().map(|&x| {
                    let z = i * rho * (half * x);
                    ((-z).exp(), z.exp())
                }));
                offs_half = half;
            }
            for p in 0..panels {
                let mid = lo + step * (T::from_count(p) + T::lit(0.5));
                let (mut sa, mut sb) = (zero, zero);
                for ((&x, &wt), &(om, op)) in rule.nodes().iter().zip(rule.weights()).zip(&offs) {
                    let qw = q.eval(mid + half * x) * wt;
                    sa = sa + om * qw;
                    sb = sb + op * qw;
                }
                let z = i * rho * mid;
                a = a + (-z).exp() * sa * half;
                b = b + z.exp() * sb * half;
            }
        }
        while next < stops.len() && (stops[next] - hi).abs() <= T::lit(1e-13) {
            segments.push((a, b));
            (a, b) = (zero, zero);
            next += 1;
        }
    }
    segments
}

/// All kernels from the prefix transforms `A(x) = int_0^x e^{-i rho t} q`
/// and `B(x) = int_0^x e^{i rho t} q`:
///
/// ```text
/// v(x)     = (e^{i rho x} A(x) - e^{-i rho x} B(x)) / (2 i rho)
/// v'(pi)   = (e^{i rho pi} A(pi) + e^{-i rho pi} B(pi)) / 2
/// ```
///
/// Same panels and rule as the direct path; the division by `rho` makes it
/// unsuitable near the origin.
fn kernels_sweep<T: Real>(q: &impl Profile<T>, config: &ProblemConfig<T>, rho: Complex<T>, rule: &GaussLegendre<T>) -> Kernels<T> {
    let pi = T::PI();
    let zero = Complex::<T>::zero();
    let i = Complex::<T>::i();
    let mut stops = config.frozen().to_vec();
    stops.push(pi);
    let mut acc = (zero, zero);
    let prefix: Vec<(Complex<T>, Complex<T>)> = segment_transforms(q, &stops, rho, rule)
        .into_iter()
        .map(|(a, b)| {
            acc = (acc.0 + a, acc.1 + b);
            acc
        })
        .collect();
    let value = |x: T, (a, b): (Complex<T>, Complex<T>)| {
        let z = i * rho * x;
        (z.exp() * a - (-z).exp() * b) / (i * rho * T::lit(2.0))
    };
    let at_frozen = config
        .frozen()
        .iter()
        .zip(&prefix)
        .map(|(&x, &ab)| value(x, ab))
        .collect();
    let end = prefix[prefix.len() - 1];
    let at_end = match config.beta() {
        BoundaryOrder::Value => value(pi, end),
        BoundaryOrder::Derivative => {
            let z = i * rho * pi;
            (z.exp() * end.0 + (-z).exp() * end.1) * T::lit(0.5)
        }
    };
    Kernels { at_frozen, at_end }
}

/// The potential-dependent part `Delta(q) - Delta(0)` written as
/// `sum_i int_0^pi G_i(t) q(t) dt` with
///
/// ```text
/// G_i(t) = S^(beta)(pi - a_i) C(t)      t < a_i
///        = C(a_i) S^(beta)(pi - t)      t > a_i
/// ```
///
/// where `S(x) = sin(rho x)/rho`. `|G_i| <= e^{pi |Im rho|}`, whereas the two
/// terms of the reduced form each grow like `e^{(pi + a_i) |Im rho|}` and
/// cancel.
fn green_value<T: Real>(q: &impl Profile<T>, config: &ProblemConfig<T>, rho: Complex<T>, rule: &GaussLegendre<T>) -> Complex<T> {
    let pi = T::PI();
    let (alpha, beta) = (config.alpha(), config.beta());
    let parts: Vec<(Complex<T>, Complex<T>)> = if rho.norm() >= T::one() {
        green_sweep(q, config, rho, rule)
    } else {
        let nodes = q.breakpoints();
        let max_phase = T::lit(MAX_PANEL_PHASE);
        config
            .frozen()
            .iter()
            .map(|&a| {
                let left = rule.composite(&breakpoints(&nodes, T::zero(), a), rho.norm(), max_phase, |t| {
                    basis(rho, t, alpha) * q.eval(t)
                });
                let right = rule.composite(&breakpoints(&nodes, a, pi), rho.norm(), max_phase, |t| {
                    basis(rho, pi - t, beta) * q.eval(t)
                });
                (left, right)
            })
            .collect()
    };
    config
        .frozen()
        .iter()
        .zip(parts)
        .fold(Complex::zero(), |s, (&a, (left, right))| {
            s + basis(rho, pi - a, beta) * left + basis(rho, a, alpha) * right
        })
}

/// `(int_0^{a_i} C q, int_{a_i}^pi S^(beta)(pi - .) q)` per frozen point from
/// segment transforms; the right-hand integrals are summed from the segments
/// themselves rather than as differences of prefixes, which would cancel.
fn green_sweep<T: Real>(
    q: &impl Profile<T>,
    config: &ProblemConfig<T>,
    rho: Complex<T>,
    rule: &GaussLegendre<T>,
) -> Vec<(Complex<T>, Complex<T>)> {
    let pi = T::PI();
    let zero = Complex::<T>::zero();
    let i = Complex::<T>::i();
    let half = T::lit(0.5);
    let mut stops = config.frozen().to_vec();
    stops.push(pi);
    let seg = segment_transforms(q, &stops, rho, rule);
    let n = config.n();
    let mut suffix = vec![(zero, zero); n + 1];
    for j in (0..n).rev() {
        let (a, b) = seg[j + 1];
        suffix[j] = (suffix[j + 1].0 + a, suffix[j + 1].1 + b);
    }
    let e = (i * rho * pi).exp();
    let e_inv = (-i * rho * pi).exp();
    let mut prefix = (zero, zero);
    (0..n)
        .map(|j| {
            prefix = (prefix.0 + seg[j].0, prefix.1 + seg[j].1);
            let (a, b) = prefix;
            let left = match config.alpha() {
                BoundaryOrder::Value => (b - a) / (i * rho * T::lit(2.0)),
                BoundaryOrder::Derivative => (a + b) * half,
            };
            let (a, b) = suffix[j];
            let right = match config.beta() {
                BoundaryOrder::Value => (e * a - e_inv * b) / (i * rho * T::lit(2.0)),
                BoundaryOrder::Derivative => (e * a + e_inv * b) * half,
            };
            (left, right)
        })
        .collect()
}

fn check<T: Real>(v: Complex<T>, rho: Complex<T>) -> Result<Complex<T>> {
    if is_finite_c(v) {
        Ok(v)
    } else {
        Err(Error::Range {
            re: rho.re.as_f64(),
            im: rho.im.as_f64(),
            hint: "overflow in the characteristic function; reduce |Im rho| or work with log-magnitudes".into(),
        })
    }
}

fn determinant_value<T: Real>(config: &ProblemConfig<T>, rho: Complex<T>, k: &Kernels<T>) -> Complex<T> {
    let n = config.n();
    let dim = n + 1;
    let mut m = CMatrix::zeros(dim);
    let one = Complex::<T>::one();
    for (i, &a) in config.frozen().iter().enumerate() {
        m.set(i, 0, basis(rho, a, config.alpha()));
        let shift = if i == 0 { one } else { Complex::zero() };
        m.set(i, 1, k.at_frozen[i] - shift);
        if i == 0 {
            for j in 2..dim {
                m.set(0, j, one);
            }
        } else {
            m.set(i, i + 1, -one);
        }
    }
    m.set(n, 0, basis_end(rho, config.alpha(), config.beta()));
    m.set(n, 1, k.at_end);
    m.determinant()
}

fn closed_value<T: Real>(config: &ProblemConfig<T>, rho: Complex<T>, k: &Kernels<T>) -> Complex<T> {
    let sum_v: Complex<T> = k.at_frozen.iter().fold(Complex::zero(), |s, v| s + v);
    let sum_c: Complex<T> = config
        .frozen()
        .iter()
        .fold(Complex::zero(), |s, &a| s + basis(rho, a, config.alpha()));
    basis_end(rho, config.alpha(), config.beta()) * (Complex::<T>::one() - sum_v) + sum_c * k.at_end
}

/// Bordered determinant evaluated by LU with partial pivoting.
pub fn char_det<T: Real>(q: &impl Profile<T>, config: &ProblemConfig<T>, rho: Complex<T>) -> Result<Complex<T>> {
    let rule = GaussLegendre::new(DEFAULT_ORDER);
    let k = kernels(q, config, rho, &rule);
    check(determinant_value(config, rho, &k), rho)
}

/// Reduced closed form of the determinant.
pub fn char_closed<T: Real>(q: &impl Profile<T>, config: &ProblemConfig<T>, rho: Complex<T>) -> Result<Complex<T>> {
    let rule = GaussLegendre::new(DEFAULT_ORDER);
    let k = kernels(q, config, rho, &rule);
    check(closed_value(config, rho, &k), rho)
}

/// Spectral difference `Delta(q1; rho) - Delta(q2; rho)`, evaluated directly
/// from `qhat = q1 - q2` so the potential-free leading term never appears.
pub fn ghat<T: Real>(q1: &Potential<T>, q2: &Potential<T>, config: &ProblemConfig<T>, rho: Complex<T>) -> Result<Complex<T>> {
    let rule = GaussLegendre::new(DEFAULT_ORDER);
    check(green_value(&Difference { q1, q2 }, config, rho, &rule), rho)
}

/// Limit of the spectral difference at `rho = 0`; the constant of the
/// canonical product representation.
pub fn ghat_at_zero<T: Real>(q1: &Potential<T>, q2: &Potential<T>, config: &ProblemConfig<T>) -> Result<Complex<T>> {
    ghat(q1, q2, config, Complex::zero())
}

/// `rho -> Delta(rho)` bound to a potential and a configuration.
#[derive(Debug, Clone)]
pub struct CharacteristicFunction<T> {
    q: Potential<T>,
    config: ProblemConfig<T>,
    method: Method,
    rule: GaussLegendre<T>,
}

impl<T: Real> CharacteristicFunction<T> {
    pub fn new(q: Potential<T>, config: ProblemConfig<T>, method: Method) -> Self {
        Self {
            q,
            config,
            method,
            rule: GaussLegendre::new(DEFAULT_ORDER),
        }
    }

    /// Replaces the per-panel Gauss-Legendre rule.
    pub fn with_order(mut self, nodes: usize) -> Self {
        self.rule = GaussLegendre::new(nodes);
        self
    }

    pub fn potential(&self) -> &Potential<T> {
        &self.q
    }

    pub fn config(&self) -> &ProblemConfig<T> {
        &self.config
    }

    pub fn method(&self) -> Method {
        self.method
    }

    /// Raw value; may be non-finite for very large `|Im rho|`.
    pub fn value(&self, rho: Complex<T>) -> Complex<T> {
        let (config, rule) = (&self.config, &self.rule);
        match self.method {
            Method::Determinant => determinant_value(config, rho, &kernels(&self.q, config, rho, rule)),
            Method::ClosedForm => closed_value(config, rho, &kernels(&self.q, config, rho, rule)),
            Method::Green => basis_end(rho, config.alpha(), config.beta()) + green_value(&self.q, config, rho, rule),
        }
    }

    pub fn eval(&self, rho: Complex<T>) -> Result<Complex<T>> {
        check(self.value(rho), rho)
    }
}

/// `Delta` from the Green-kernel form; agrees with the reduced form and stays
/// accurate relative to `|Delta|` far from the real axis.
pub fn char_green<T: Real>(q: &impl Profile<T>, config: &ProblemConfig<T>, rho: Complex<T>) -> Result<Complex<T>> {
    let rule = GaussLegendre::new(DEFAULT_ORDER);
    check(basis_end(rho, config.alpha(), config.beta()) + green_value(q, config, rho, &rule), rho)
}

/// `rho -> Ghat(rho)` for a pair of potentials sharing frozen points and boundary pair.
#[derive(Debug, Clone)]
pub struct GhatFunction<T> {
    q1: Potential<T>,
    q2: Potential<T>,
    config: ProblemConfig<T>,
    rule: GaussLegendre<T>,
}

impl<T: Real> GhatFunction<T> {
    pub fn new(q1: Potential<T>, q2: Potential<T>, config: ProblemConfig<T>) -> Self {
        Self {
            q1,
            q2,
            config,
            rule: GaussLegendre::new(DEFAULT_ORDER),
        }
    }

    /// Replaces the per-panel Gauss-Legendre rule.
    pub fn with_order(mut self, nodes: usize) -> Self {
        self.rule = GaussLegendre::new(nodes);
        self
    }

    pub fn potentials(&self) -> (&Potential<T>, &Potential<T>) {
        (&self.q1, &self.q2)
    }

    pub fn config(&self) -> &ProblemConfig<T> {
        &self.config
    }

    pub fn difference(&self) -> Difference<'_, T> {
        Difference { q1: &self.q1, q2: &self.q2 }
    }

    pub fn value(&self, rho: Complex<T>) -> Complex<T> {
        green_value(&self.difference(), &self.config, rho, &self.rule)
    }

    pub fn eval(&self, rho: Complex<T>) -> Result<Complex<T>> {
        check(self.value(rho), rho)
    }

    pub fn at_zero(&self) -> Complex<T> {
        self.value(Complex::zero())
    }
}
