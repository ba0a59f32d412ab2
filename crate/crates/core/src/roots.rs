//! Sign-change scanning and bracketed refinement for real functions of one
//! real variable.

use rayon::prelude::*;

use crate::scalar::Real;

/// A located root with the residual `|g(x)|` at the returned point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root<T> {
    pub x: T,
    pub residual: T,
    /// `max(|g|)` over the bracketing scan cell, for relative residual tests.
    pub scale: T,
}

/// Brackets `(a, b, g(a), g(b))` with a strict sign change, plus grid nodes
/// where `g` is exactly zero.
#[derive(Debug, Clone, Default)]
pub struct Scan<T> {
    pub brackets: Vec<(T, T, T, T)>,
    pub exact: Vec<(T, T)>,
}

/// Evaluates `g` on `lo, lo + step, ..., hi` and records sign changes.
pub fn scan<T: Real, G: Fn(T) -> T + Sync>(g: &G, lo: T, hi: T, step: T) -> Scan<T> {
    let n = ((hi - lo) / step).ceil().to_usize().unwrap_or(0).max(1);
    let xs: Vec<T> = (0..=n)
        .map(|j| if j == n { hi } else { lo + step * T::from_count(j) })
        .collect();
    let vals: Vec<T> = xs.par_iter().map(|&x| g(x)).collect();
    let mut out = Scan::default();
    for j in 0..n {
        let (fa, fb) = (vals[j], vals[j + 1]);
        if fa == T::zero() {
            let scale = fb.abs().max(if j > 0 { vals[j - 1].abs() } else { T::zero() });
            out.exact.push((xs[j], scale));
        } else if fb != T::zero() && (fa < T::zero()) != (fb < T::zero()) {
            out.brackets.push((xs[j], xs[j + 1], fa, fb));
        }
    }
    if vals[n] == T::zero() {
        out.exact.push((xs[n], vals[n - 1].abs()));
    }
    out
}

/// Bisection down to a narrow bracket, then safeguarded Newton with a
/// central-difference derivative.
pub fn refine<T: Real, G: Fn(T) -> T>(g: &G, a: T, b: T, fa: T, fb: T) -> Root<T> {
    let scale = fa.abs().max(fb.abs());
    let (mut a, mut b, mut fa) = (a, b, fa);
    let _ = fb;
    let width0 = b - a;
    let eps = T::epsilon();
    // bisection phase
    for _ in 0..200 {
        if b - a <= width0 * T::lit(1e-4) {
            break;
        }
        let m = a + (b - a) * T::lit(0.5);
        let fm = g(m);
        if fm == T::zero() {
            return Root { x: m, residual: T::zero(), scale };
        }
        if (fm < T::zero()) == (fa < T::zero()) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    // Newton phase, kept inside [a, b]
    let mut x = a + (b - a) * T::lit(0.5);
    let mut fx = g(x);
    for _ in 0..60 {
        if fx == T::zero() {
            break;
        }
        let h = T::lit(1e-7) * x.abs().max(T::one());
        let d = (g(x + h) - g(x - h)) / (h + h);
        let mut next = if d != T::zero() && d.is_finite() { x - fx / d } else { T::nan() };
        if !(next > a && next < b) {
            next = a + (b - a) * T::lit(0.5);
        }
        let fn_ = g(next);
        if (fn_ < T::zero()) == (fa < T::zero()) {
            a = next;
            fa = fn_;
        } else {
            b = next;
        }
        let step = (next - x).abs();
        x = next;
        fx = fn_;
        if step <= T::lit(4.0) * eps * x.abs().max(T::one()) || b - a <= T::lit(4.0) * eps * x.abs().max(T::one()) {
            break;
        }
    }
    // the endpoint of the final bracket may be closer
    let (fa_abs, fb_abs) = (g(a).abs(), g(b).abs());
    let mut best = (x, fx.abs());
    if fa_abs < best.1 {
        best = (a, fa_abs);
    }
    if fb_abs < best.1 {
        best = (b, fb_abs);
    }
    Root {
        x: best.0,
        residual: best.1,
        scale,
    }
}

/// All sign-change roots of `g` on `[lo, hi]`, refined and sorted.
pub fn find_roots<T: Real, G: Fn(T) -> T + Sync>(g: &G, lo: T, hi: T, step: T) -> Vec<Root<T>> {
    let s = scan(g, lo, hi, step);
    let mut roots: Vec<Root<T>> = s
        .brackets
        .par_iter()
        .map(|&(a, b, fa, fb)| refine(g, a, b, fa, fb))
        .collect();
    roots.extend(s.exact.iter().map(|&(x, scale)| Root {
        x,
        residual: T::zero(),
        scale,
    }));
    roots.sort_by(|p, q| p.x.partial_cmp(&q.x).expect("finite roots"));
    roots
}
