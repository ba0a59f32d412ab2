#![allow(dead_code)]

use frozen_spectral::model::{Potential, ProblemConfig};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

pub type C64 = num_complex::Complex<f64>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Trigonometric polynomial of degree <= 4 scaled so that `|q| <= amp`.
pub fn band_limited(rng: &mut impl Rng, amp: f64, m: usize) -> Potential<f64> {
    let a: Vec<f64> = (0..5).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let b: Vec<f64> = (0..5).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let total: f64 = a.iter().chain(&b[1..]).map(|c| c.abs()).sum();
    let scale = amp / total;
    Potential::from_fn(m, |x: f64| {
        (0..5)
            .map(|k| a[k] * (k as f64 * x).cos() + b[k] * (k as f64 * x).sin())
            .sum::<f64>()
            * scale
    })
    .unwrap()
}

/// Sorted frozen points in `(0.1, pi - 0.1)` at least 0.05 apart.
pub fn frozen_points(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    loop {
        let mut a: Vec<f64> = (0..n).map(|_| rng.gen_range(0.1..PI - 0.1)).collect();
        a.sort_by(|x, y| x.partial_cmp(y).unwrap());
        if a.windows(2).all(|w| w[1] - w[0] > 0.05) {
            return a;
        }
    }
}

pub fn config(frozen: &[f64], alpha: u8, beta: u8) -> ProblemConfig<f64> {
    ProblemConfig::new(frozen.to_vec(), alpha, beta).unwrap()
}

/// Composite Simpson on `[a, b]` with `n` (even) panels; deliberately
/// unrelated to the library's Gauss-Legendre code.
pub fn simpson<F: Fn(f64) -> C64>(f: F, a: f64, b: f64, n: usize) -> C64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for j in 1..n {
        let w = if j % 2 == 1 { 4.0 } else { 2.0 };
        s += f(a + h * j as f64) * w;
    }
    s * (h / 3.0)
}

pub fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(1e-300)
}
