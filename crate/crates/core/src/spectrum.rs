//! Real eigenvalues of the frozen-argument problem from the characteristic
//! determinant and, independently, from RK4 shooting.
//!
//! Roots are searched in the signed frequency `s` with `lambda = s |s|`:
//! `s >= 0` is `rho = s` and `s < 0` is `rho = i |s|`, so negative
//! eigenvalues are found by the same scan. `Spectrum::rhos` holds `s`.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::charfn::char_green;
use crate::error::{Error, Result};
use crate::model::{merge_sorted, BoundaryOrder, ProblemConfig, Profile};
use crate::quad::breakpoints;
use crate::roots::{find_roots, refine, Root};
use crate::scalar::{cplx, Real};

pub use crate::contour::{count_zeros_disk, ZeroCount};

/// Roots closer than this are merged.
pub const DEDUP_TOL: f64 = 1e-8;
/// Residual tolerance relative to the scale of `Delta` near the root.
pub const RESIDUAL_TOL: f64 = 1e-10;
/// Largest step-induced change of an eigenvalue accepted by the shooting oracle.
pub const STEP_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpectrumMethod {
    RootScan,
    Shooting,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum<T> {
    pub rhos: Vec<T>,
    pub lambdas: Vec<T>,
    pub residuals: Vec<T>,
    pub method: SpectrumMethod,
    #[serde(skip)]
    pub warnings: Vec<String>,
}

impl<T: Real> Spectrum<T> {
    /// Builds a spectrum from signed roots; `lambda = s |s|`.
    pub fn from_roots(rhos: Vec<T>, residuals: Vec<T>, method: SpectrumMethod) -> Self {
        let lambdas = rhos.iter().map(|&s| s * s.abs()).collect();
        Spectrum {
            rhos,
            lambdas,
            residuals,
            method,
            warnings: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.rhos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rhos.is_empty()
    }
}

/// Complex frequency for a signed root.
#[inline]
pub fn signed_rho<T: Real>(s: T) -> Complex<T> {
    if s >= T::zero() {
        cplx(s, T::zero())
    } else {
        cplx(T::zero(), -s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanOptions<T> {
    pub step: T,
    /// Step halvings allowed when the disk count disagrees with the scan.
    pub refinements: usize,
    /// Compare against an argument-principle count of the determinant.
    pub check_count: bool,
}

impl<T: Real> Default for ScanOptions<T> {
    fn default() -> Self {
        ScanOptions {
            step: T::lit(0.05),
            refinements: 3,
            check_count: true,
        }
    }
}

fn dedup<T: Real>(mut roots: Vec<Root<T>>) -> Vec<Root<T>> {
    roots.dedup_by(|b, a| {
        if (b.x - a.x).abs() <= T::lit(DEDUP_TOL) {
            if b.residual < a.residual {
                *a = *b;
            }
            true
        } else {
            false
        }
    });
    roots
}

/// Largest `mu` for which `rho = i mu` can be a zero of `Delta`.
///
/// On `rho = i mu` the leading term `C^(beta)(pi)` dominates the potential
/// term once `mu^2 (1 - e^{-2 pi mu}) > c N ||q||_inf` with `c = 1, 2, 2, 4`
/// for `(alpha, beta) = (0,0), (0,1), (1,0), (1,1)`, so the negative side
/// of the scan stops there. `||q||_inf` is taken from a dense sampling
/// with a 10% margin.
fn negative_limit<T: Real>(q: &impl Profile<T>, config: &ProblemConfig<T>) -> T {
    let b = q.breakpoints();
    let mut sup = T::zero();
    for w in b.windows(2) {
        for j in 0..=8 {
            let t = w[0] + (w[1] - w[0]) * T::from_count(j) / T::lit(8.0);
            sup = sup.max(q.eval(t).abs());
        }
    }
    let c = match (config.alpha(), config.beta()) {
        (BoundaryOrder::Value, BoundaryOrder::Value) => 1.0,
        (BoundaryOrder::Derivative, BoundaryOrder::Derivative) => 4.0,
        _ => 2.0,
    };
    let mu = (T::lit(c * 1.1 / 0.998) * T::from_count(config.n()) * sup).sqrt();
    mu.max(T::one()) + T::lit(0.25)
}

/// First `m` roots of `g` in the signed variable, extending the scan range
/// until enough are found.
fn signed_roots<T: Real, G: Fn(T) -> T + Sync>(g: &G, m: usize, step: T, neg: T) -> Result<(Vec<Root<T>>, T)> {
    let mut hi = T::from_count(m + 2);
    let lo = -neg;
    for _ in 0..32 {
        let mut roots = find_roots(g, lo, T::zero(), step);
        roots.extend(find_roots(g, T::zero(), hi, step));
        roots.sort_by(|a, b| a.x.partial_cmp(&b.x).expect("finite roots"));
        let roots = dedup(roots);
        if roots.len() > m {
            return Ok((roots, hi));
        }
        hi = hi + T::from_count(m / 2 + 2);
    }
    Err(Error::Bracket(format!("fewer than {} roots found below s = {}", m, hi)))
}

fn check_residuals<T: Real>(roots: &[Root<T>], warnings: &mut Vec<String>) -> Result<()> {
    for r in roots {
        if !r.residual.is_finite() {
            return Err(Error::NonFinite {
                context: format!("characteristic function at s = {}", r.x),
            });
        }
        if r.residual > T::lit(RESIDUAL_TOL) * r.scale.max(T::min_positive_value()) {
            warnings.push(format!(
                "root at s = {} has residual {:e} above tolerance (scale {:e})",
                r.x, r.residual, r.scale
            ));
        }
    }
    Ok(())
}

/// The first `m` eigenvalues `lambda = rho^2` in increasing order, located as
/// sign changes of `Delta` along the real and imaginary `rho` axes.
pub fn real_eigenvalues<T: Real>(q: &impl Profile<T>, config: &ProblemConfig<T>, m: usize) -> Result<Spectrum<T>> {
    real_eigenvalues_with(q, config, m, &ScanOptions::default())
}

pub fn real_eigenvalues_with<T: Real>(
    q: &impl Profile<T>,
    config: &ProblemConfig<T>,
    m: usize,
    opts: &ScanOptions<T>,
) -> Result<Spectrum<T>> {
    if m == 0 {
        return Err(Error::invalid("count", "must be at least 1"));
    }
    if !(opts.step > T::zero()) {
        return Err(Error::invalid("scan_step", "must be positive"));
    }
    let delta = |rho: Complex<T>| char_green(q, config, rho).unwrap_or(cplx(T::nan(), T::nan()));
    let g = |s: T| delta(signed_rho(s)).re;
    let neg = negative_limit(q, config);
    let mut step = opts.step;
    let mut warnings = Vec::new();
    let mut round = 0;
    let roots = loop {
        let (roots, hi) = signed_roots(&g, m, step, neg)?;
        if !opts.check_count {
            break roots;
        }
        let magnitude = |r: &Root<T>| r.x.abs();
        let mut sizes: Vec<T> = roots.iter().map(magnitude).collect();
        sizes.sort_by(|a, b| a.partial_cmp(b).expect("finite roots"));
        let radius = match sizes.get(m) {
            Some(&next) => (sizes[m - 1] + next) * T::lit(0.5),
            None => hi,
        };
        let expected = 2 * sizes.iter().filter(|&&s| s < radius).count();
        let counted = match count_zeros_disk(&delta, radius, 256) {
            Ok(c) => c,
            Err(e) => {
                warnings.push(format!("zero count in |rho| < {radius} unavailable: {e}"));
                break roots;
            }
        };
        if counted.count == expected {
            break roots;
        }
        if round == opts.refinements {
            warnings.push(format!(
                "{} zeros of the characteristic function in |rho| < {} but {} on the axes: complex or multiple eigenvalues",
                counted.count, counted.radius, expected
            ));
            break roots;
        }
        round += 1;
        step = step * T::lit(0.5);
        log::debug!("count mismatch ({} vs {}), scan step -> {}", counted.count, expected, step);
    };
    check_residuals(&roots, &mut warnings)?;
    let mut first: Vec<Root<T>> = roots;
    first.sort_by(|a, b| (a.x * a.x.abs()).partial_cmp(&(b.x * b.x.abs())).expect("finite"));
    first.truncate(m);
    let residuals = first.iter().map(|r| delta(signed_rho(r.x)).norm()).collect();
    let mut spec = Spectrum::from_roots(first.iter().map(|r| r.x).collect(), residuals, SpectrumMethod::RootScan);
    spec.warnings = warnings;
    Ok(spec)
}

/// Default maximal RK4 step of the shooting oracle.
pub fn default_rk4_step<T: Real>() -> T {
    T::PI() / T::lit(4096.0)
}

/// Fixed-step RK4 integrator for `y = y0 + S v` with
/// `y0'' = -lambda y0` and `v'' = -lambda v + q`, `v(0) = v'(0) = 0`.
///
/// Steps are aligned with the potential's nodes and the frozen points; the
/// potential is sampled once at all stage abscissae.
#[derive(Debug, Clone)]
pub struct Shooter<T> {
    /// `(h, q(t), q(t + h/2), q(t + h))` per step.
    steps: Vec<(T, T, T, T)>,
    /// Step count after which each frozen point is reached.
    marks: Vec<usize>,
    alpha: BoundaryOrder,
    beta: BoundaryOrder,
}

impl<T: Real> Shooter<T> {
    pub fn new(q: &impl Profile<T>, config: &ProblemConfig<T>, max_step: T) -> Result<Self> {
        if !(max_step > T::zero()) {
            return Err(Error::invalid("rk4_step", "must be positive"));
        }
        let pi = T::PI();
        let breaks = merge_sorted(&breakpoints(&q.breakpoints(), T::zero(), pi), config.frozen());
        let mut steps = Vec::new();
        let mut marks = Vec::with_capacity(config.n());
        let mut next = 0;
        let frozen = config.frozen();
        for w in breaks.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            let n = ((hi - lo) / max_step).ceil().to_usize().unwrap_or(1).max(1);
            let h = (hi - lo) / T::from_count(n);
            for k in 0..n {
                let t = lo + h * T::from_count(k);
                let end = if k + 1 == n { hi } else { t + h };
                steps.push((end - t, q.eval(t), q.eval(t + (end - t) * T::lit(0.5)), q.eval(end)));
            }
            while next < frozen.len() && (frozen[next] - hi).abs() <= T::lit(1e-13) {
                marks.push(steps.len());
                next += 1;
            }
        }
        if marks.len() != frozen.len() {
            return Err(Error::invalid("problem.frozen", "frozen point not aligned with the integration grid"));
        }
        Ok(Shooter {
            steps,
            marks,
            alpha: config.alpha(),
            beta: config.beta(),
        })
    }

    /// `y0^(beta)(pi) (1 - sum v(a_i)) + (sum y0(a_i)) v^(beta)(pi)`.
    pub fn condition(&self, lambda: T) -> T {
        let (mut y, mut p) = match self.alpha {
            BoundaryOrder::Value => (T::zero(), T::one()),
            BoundaryOrder::Derivative => (T::one(), T::zero()),
        };
        let (mut v, mut w) = (T::zero(), T::zero());
        let (mut sum_y, mut sum_v) = (T::zero(), T::zero());
        let half = T::lit(0.5);
        let sixth = T::one() / T::lit(6.0);
        let two = T::lit(2.0);
        let mut mark = 0;
        for (k, &(h, q0, qm, q1)) in self.steps.iter().enumerate() {
            // y0: homogeneous part
            let (k1y, k1p) = (p, -lambda * y);
            let (k2y, k2p) = (p + half * h * k1p, -lambda * (y + half * h * k1y));
            let (k3y, k3p) = (p + half * h * k2p, -lambda * (y + half * h * k2y));
            let (k4y, k4p) = (p + h * k3p, -lambda * (y + h * k3y));
            y = y + h * sixth * (k1y + two * k2y + two * k3y + k4y);
            p = p + h * sixth * (k1p + two * k2p + two * k3p + k4p);
            // v: forced part
            let (k1v, k1w) = (w, -lambda * v + q0);
            let (k2v, k2w) = (w + half * h * k1w, -lambda * (v + half * h * k1v) + qm);
            let (k3v, k3w) = (w + half * h * k2w, -lambda * (v + half * h * k2v) + qm);
            let (k4v, k4w) = (w + h * k3w, -lambda * (v + h * k3v) + q1);
            v = v + h * sixth * (k1v + two * k2v + two * k3v + k4v);
            w = w + h * sixth * (k1w + two * k2w + two * k3w + k4w);
            while mark < self.marks.len() && self.marks[mark] == k + 1 {
                sum_y = sum_y + y;
                sum_v = sum_v + v;
                mark += 1;
            }
        }
        let (y_end, v_end) = match self.beta {
            BoundaryOrder::Value => (y, v),
            BoundaryOrder::Derivative => (p, w),
        };
        y_end * (T::one() - sum_v) + sum_y * v_end
    }

    pub fn step_count(&self) -> usize {
        self.steps.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShootingOptions<T> {
    pub max_step: T,
    pub scan_step: T,
}

impl<T: Real> Default for ShootingOptions<T> {
    fn default() -> Self {
        ShootingOptions {
            max_step: default_rk4_step(),
            scan_step: T::lit(0.05),
        }
    }
}

/// Eigenvalues from the shooting condition, independent of the determinant code.
pub fn shooting_eigenvalues<T: Real>(q: &impl Profile<T>, config: &ProblemConfig<T>, m: usize) -> Result<Spectrum<T>> {
    shooting_eigenvalues_with(q, config, m, &ShootingOptions::default())
}

pub fn shooting_eigenvalues_with<T: Real>(
    q: &impl Profile<T>,
    config: &ProblemConfig<T>,
    m: usize,
    opts: &ShootingOptions<T>,
) -> Result<Spectrum<T>> {
    if m == 0 {
        return Err(Error::invalid("count", "must be at least 1"));
    }
    let coarse = Shooter::new(q, config, opts.max_step)?;
    let fine = Shooter::new(q, config, opts.max_step * T::lit(0.5))?;
    let g = |s: T| coarse.condition(s * s.abs());
    let g_fine = |s: T| fine.condition(s * s.abs());
    let (mut roots, _) = signed_roots(&g, m, opts.scan_step, negative_limit(q, config))?;
    roots.sort_by(|a, b| (a.x * a.x.abs()).partial_cmp(&(b.x * b.x.abs())).expect("finite"));
    roots.truncate(m);
    let mut warnings = Vec::new();
    check_residuals(&roots, &mut warnings)?;
    let mut rhos = Vec::with_capacity(m);
    let mut residuals = Vec::with_capacity(m);
    for r in &roots {
        let halved = refine_near(&g_fine, r.x, opts.scan_step).unwrap_or(*r);
        let (l0, l1) = (r.x * r.x.abs(), halved.x * halved.x.abs());
        if (l0 - l1).abs() > T::lit(STEP_TOL) {
            warnings.push(format!(
                "eigenvalue {} moved by {:e} when the RK4 step was halved; using the finer result",
                l0,
                (l0 - l1).abs()
            ));
            rhos.push(halved.x);
            residuals.push(halved.residual);
        } else {
            rhos.push(r.x);
            residuals.push(r.residual);
        }
    }
    let mut spec = Spectrum::from_roots(rhos, residuals, SpectrumMethod::Shooting);
    spec.warnings = warnings;
    Ok(spec)
}

/// Re-locates a root of `g` close to `x` by widening a symmetric bracket.
fn refine_near<T: Real, G: Fn(T) -> T>(g: &G, x: T, max_width: T) -> Option<Root<T>> {
    let mut d = T::lit(1e-6) * x.abs().max(T::one());
    while d <= max_width {
        let (a, b) = (x - d, x + d);
        let (fa, fb) = (g(a), g(b));
        if fa == T::zero() {
            return Some(Root { x: a, residual: T::zero(), scale: fb.abs() });
        }
        if fb == T::zero() {
            return Some(Root { x: b, residual: T::zero(), scale: fa.abs() });
        }
        if (fa < T::zero()) != (fb < T::zero()) {
            return Some(refine(g, a, b, fa, fb));
        }
        d = d * T::lit(10.0);
    }
    None
}

/// Greedy nearest-neighbour pairing of two point sets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Matching<T> {
    /// `(index in A, index in B, |a - b|)`, ordered by the index in A.
    pub pairs: Vec<(usize, usize, T)>,
    pub max_gap: T,
    /// Index in A of the pair with the largest gap.
    pub max_gap_index: usize,
    /// `sum |a - b|^2` over the pairs.
    pub sum_sq: T,
    /// `sqrt(sum_sq)`.
    pub distance: T,
    /// Points left unpaired because the sets differ in length.
    pub surplus: usize,
}

fn greedy<T: Real, P: Copy>(a: &[P], b: &[P], dist: impl Fn(P, P) -> T) -> Matching<T> {
    let n = a.len().min(b.len());
    let mut cand: Vec<(T, usize, usize)> = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            cand.push((dist(a[i], b[j]), i, j));
        }
    }
    cand.sort_by(|x, y| {
        x.0.partial_cmp(&y.0)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(x.1.cmp(&y.1))
            .then(x.2.cmp(&y.2))
    });
    let (mut used_a, mut used_b) = (vec![false; n], vec![false; n]);
    let mut pairs = Vec::with_capacity(n);
    for (d, i, j) in cand {
        if !used_a[i] && !used_b[j] {
            used_a[i] = true;
            used_b[j] = true;
            pairs.push((i, j, d));
        }
    }
    pairs.sort_by_key(|p| p.0);
    let mut max_gap = T::zero();
    let mut max_gap_index = 0;
    let mut sum_sq = T::zero();
    for &(i, _, d) in &pairs {
        if d > max_gap {
            max_gap = d;
            max_gap_index = i;
        }
        sum_sq = sum_sq + d * d;
    }
    Matching {
        pairs,
        max_gap,
        max_gap_index,
        sum_sq,
        distance: sum_sq.sqrt(),
        surplus: a.len().max(b.len()) - n,
    }
}

/// Pairs the common prefix of two spectra by nearest `rho`.
pub fn match_spectra<T: Real>(a: &Spectrum<T>, b: &Spectrum<T>) -> Matching<T> {
    greedy(&a.rhos, &b.rhos, |x, y| (x - y).abs())
}

/// Pairs the common prefix of two complex point sets by nearest neighbour.
pub fn match_points<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> Matching<T> {
    greedy(a, b, |x, y| (x - y).norm())
}

impl<T: Real> Matching<T> {
    pub fn empty() -> Self {
        Matching {
            pairs: Vec::new(),
            max_gap: T::zero(),
            max_gap_index: 0,
            sum_sq: T::zero(),
            distance: T::zero(),
            surplus: 0,
        }
    }
}

impl<T: Real> Default for Matching<T> {
    fn default() -> Self {
        Self::empty()
    }
}
