//! Gauss-Legendre quadrature and the composite panel rule used for every
//! oscillatory integral in the crate.

use std::ops::{Add, Mul};

use num_traits::Zero;

use crate::scalar::Real;

/// Maximum phase (radians) of `exp(i rho t)` across one panel of the default rule.
pub const MAX_PANEL_PHASE: f64 = 2.0;

/// Order of the rule used inside each panel.
pub const DEFAULT_ORDER: usize = 8;

/// An `n`-point Gauss-Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre<T> {
    nodes: Vec<T>,
    weights: Vec<T>,
}

impl<T: Real> GaussLegendre<T> {
    /// Builds the rule by Newton iteration on the Legendre polynomial `P_n`.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0f64; n];
        let mut weights = vec![0.0f64; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            // Tricomi initial guess
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self {
            nodes: nodes.into_iter().map(T::lit).collect(),
            weights: weights.into_iter().map(T::lit).collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    /// Integrates `f` over `[a, b]` with a single application of the rule.
    #[inline]
    pub fn integrate<V, F>(&self, a: T, b: T, mut f: F) -> V
    where
        V: Copy + Zero + Add<Output = V> + Mul<T, Output = V>,
        F: FnMut(T) -> V,
    {
        let half = (b - a) * T::lit(0.5);
        let mid = (b + a) * T::lit(0.5);
        let mut acc = V::zero();
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc = acc + f(mid + half * *x) * *w;
        }
        acc * half
    }

    /// Composite rule over consecutive `breaks`, splitting each piece so the
    /// phase `freq * width` per panel stays below `max_phase`.
    pub fn composite<V, F>(&self, breaks: &[T], freq: T, max_phase: T, mut f: F) -> V
    where
        V: Copy + Zero + Add<Output = V> + Mul<T, Output = V>,
        F: FnMut(T) -> V,
    {
        let mut acc = V::zero();
        for w in breaks.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            if hi <= lo {
                continue;
            }
            let panels = panel_count(hi - lo, freq, max_phase, 1);
            let step = (hi - lo) / T::from_count(panels);
            for p in 0..panels {
                let a = lo + step * T::from_count(p);
                let b = if p + 1 == panels { hi } else { a + step };
                acc = acc + self.integrate(a, b, &mut f);
            }
        }
        acc
    }
}

/// Number of panels needed on an interval of `width` for oscillation `freq`.
pub fn panel_count<T: Real>(width: T, freq: T, max_phase: T, min: usize) -> usize {
    let need = (freq.abs() * width / max_phase).ceil();
    let need = need.to_usize().unwrap_or(usize::MAX / 2);
    need.max(min).max(1)
}

/// `[lo, interior nodes..., hi]` for a sorted node list.
pub fn breakpoints<T: Real>(nodes: &[T], lo: T, hi: T) -> Vec<T> {
    let mut out = Vec::with_capacity(nodes.len() + 2);
    out.push(lo);
    out.extend(nodes.iter().copied().filter(|&x| x > lo && x < hi));
    if hi > lo {
        out.push(hi);
    }
    out
}

/// Value and derivative of the Legendre polynomial `P_n` at `x`.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn integrates_polynomials_exactly() {
        let rule = GaussLegendre::<f64>::new(8);
        // degree 15 is the highest exact degree for 8 nodes
        let v: f64 = rule.integrate(0.0, 2.0, |x| x.powi(15));
        assert_relative_eq!(v, 2f64.powi(16) / 16.0, max_relative = 1e-13);
        let w: f64 = rule.weights().iter().sum();
        assert_relative_eq!(w, 2.0, max_relative = 1e-14);
    }

    #[test]
    fn composite_handles_oscillation() {
        let rule = GaussLegendre::<f64>::new(8);
        let freq = 150.0;
        let v: f64 = rule.composite(&[0.0, 1.0, std::f64::consts::PI], freq, 2.0, |t| (freq * t).cos());
        assert!((v - (freq * std::f64::consts::PI).sin() / freq).abs() < 1e-13);
    }

    #[test]
    fn single_node_rule_is_midpoint() {
        let rule = GaussLegendre::<f64>::new(1);
        assert_eq!(rule.nodes()[0], 0.0);
        assert_relative_eq!(rule.weights()[0], 2.0);
    }

    #[test]
    fn breakpoints_clip_to_interval() {
        let b = breakpoints(&[0.0, 0.5, 1.0, 1.5, 2.0], 0.25, 1.5);
        assert_eq!(b, vec![0.25, 0.5, 1.0, 1.5]);
    }
}
