//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fail.

mod common;

use common::*;
use frozen_spectral::charfn::{char_closed, char_det, GhatFunction};
use frozen_spectral::contour::count_zeros_disk;
use frozen_spectral::entire::{cartwright_product, effective_support_width, ZeroSet};
use frozen_spectral::instability::{
    corollary_bound, plancherel_polya_check, sine_system, sine_type_interpolate, theorem32_bound, CorollaryOptions,
};
use frozen_spectral::model::{PaleyWiener, Window};
use frozen_spectral::spectrum::{real_eigenvalues, shooting_eigenvalues};
use frozen_spectral::Potential;
use rand::Rng;
use std::f64::consts::PI;
use std::time::Instant;

const BOUNDARIES: [(u8, u8); 4] = [(0, 0), (0, 1), (1, 0), (1, 1)];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn unperturbed_spectra() -> Outcome {
    let zero = Potential::zero(64);
    let mut worst: f64 = 0.0;
    let frozen = [vec![1.3], vec![0.4, 2.0], vec![0.7, 1.6, 2.9]];
    for a in &frozen {
        for (alpha, beta) in BOUNDARIES {
            let s = real_eigenvalues(&zero, &config(a, alpha, beta), 6).unwrap();
            for (j, l) in s.lambdas.iter().enumerate() {
                let k = j as f64;
                let expected = match (alpha, beta) {
                    (0, 0) => (k + 1.0) * (k + 1.0),
                    (1, 1) => k * k,
                    _ => (k + 0.5) * (k + 0.5),
                };
                worst = worst.max((l - expected).abs());
            }
        }
    }
    outcome(worst <= 1e-10, format!("max |lambda - exact| = {worst:.2e} (tol 1e-10)"))
}

fn determinant_equivalence() -> Outcome {
    let mut r = rng(2);
    let mut worst: f64 = 0.0;
    for j in 0..400 {
        let (alpha, beta) = BOUNDARIES[j % 4];
        let n = r.gen_range(1..=5);
        let cfg = config(&frozen_points(&mut r, n), alpha, beta);
        let q = band_limited(&mut r, 1.0, 128);
        let rho = C64::new(r.gen_range(-20.0..20.0), r.gen_range(-2.0..2.0));
        let (d, c) = (char_det(&q, &cfg, rho).unwrap(), char_closed(&q, &cfg, rho).unwrap());
        worst = worst.max(rel(d, c));
    }
    outcome(worst <= 1e-8, format!("max relative gap over 400 samples = {worst:.2e} (tol 1e-8)"))
}

fn oracle_spectra() -> Outcome {
    let start = Instant::now();
    let mut r = rng(3);
    let mut worst: f64 = 0.0;
    for j in 0..20 {
        let (alpha, beta) = BOUNDARIES[j % 4];
        let n = 1 + (j / 4) % 3;
        let cfg = config(&frozen_points(&mut r, n), alpha, beta);
        let q = band_limited(&mut r, 1.0, 256);
        let a = real_eigenvalues(&q, &cfg, 15).unwrap();
        let b = shooting_eigenvalues(&q, &cfg, 15).unwrap();
        if a.len() != 15 || b.len() != 15 {
            return outcome(false, format!("potential {j}: {} vs {} eigenvalues", a.len(), b.len()));
        }
        for (x, y) in a.lambdas.iter().zip(&b.lambdas) {
            worst = worst.max((x - y).abs());
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        worst <= 1e-6 && secs <= 300.0,
        format!("max |lambda_scan - lambda_shoot| = {worst:.2e} (tol 1e-6), {secs:.1} s (limit 300 s)"),
    )
}

fn winding_counts() -> Outcome {
    let f = |z: C64| (z * PI).sin();
    let mut pass = true;
    let mut got = Vec::new();
    for (radius, expected) in [(5.5, 11), (10.5, 21), (20.5, 41)] {
        let zc = count_zeros_disk(&f, radius, 256).unwrap();
        pass &= zc.count == expected && zc.radius == radius;
        got.push(format!("r={radius}: {} (expected {expected})", zc.count));
    }
    outcome(pass, got.join(", "))
}

fn support_recovery() -> Outcome {
    let cases = [
        (Window::indicator(0.0, PI), PI, 0.05),
        (Window::indicator(0.0, PI / 2.0), PI / 2.0, 0.05),
        (Window::indicator(PI / 4.0, 3.0 * PI / 4.0), PI / 2.0, 0.07),
    ];
    let mut pass = true;
    let mut got = Vec::new();
    for (w, exact, tol) in cases {
        let pw = PaleyWiener::new(w);
        let est = effective_support_width(&|z| pw.eval(z), 200.0).unwrap().width;
        let err = (est - exact).abs() / exact;
        pass &= err <= tol;
        got.push(format!("{est:.4} vs {exact:.4} ({:.2}% of {:.0}%)", err * 100.0, tol * 100.0));
    }
    outcome(pass, got.join(", "))
}

fn probe_points(seed: u64, x_max: f64, y_max: f64) -> Vec<(f64, f64)> {
    let mut r = rng(seed);
    (0..500).map(|_| (r.gen_range(-x_max..x_max), r.gen_range(-y_max..y_max))).collect()
}

fn plancherel_polya() -> Outcome {
    let sinc = |z: C64| if z.norm() < 1e-8 { C64::new(PI, 0.0) } else { (z * PI).sin() / z };
    let rep = plancherel_polya_check(&sinc, PI, &probe_points(6, 50.0, 3.0)).unwrap();
    let mut max = rep.max_ratio;
    let mut corrected = rep.max_ratio_squared_type;
    let mut parts = vec![format!("sin(pi z)/z: {:.4} at {:?}", rep.max_ratio, rep.worst)];
    let mut r = rng(16);
    for j in 0..5 {
        let a = frozen_points(&mut r, 1 + j % 3);
        let sigma = PI + a[a.len() - 1];
        let g = GhatFunction::new(band_limited(&mut r, 1.0, 256), band_limited(&mut r, 1.0, 256), config(&a, 0, 0));
        let rep = plancherel_polya_check(&|z| g.value(z), sigma, &probe_points(60 + j as u64, 50.0, 5.0)).unwrap();
        max = max.max(rep.max_ratio);
        corrected = corrected.max(rep.max_ratio_squared_type);
        parts.push(format!("pair {j}: {:.2e}", rep.max_ratio));
    }
    parts.push(format!("with e^(2 sigma(|y|+1)) the maximum is {corrected:.4}"));
    outcome(max <= 1.0 + 1e-6, format!("max ratio {max:.4} (tol 1 + 1e-6); {}", parts.join(", ")))
}

fn theorem_bound() -> Outcome {
    let pairs = [
        (
            Potential::from_fn(256, f64::cos).unwrap(),
            Potential::zero(256),
            config(&[1.0, 2.0], 0, 0),
        ),
        (
            Potential::from_fn(256, |x: f64| 1.0 + 0.3 * x.cos()).unwrap(),
            Potential::from_fn(256, |x: f64| 1.0 + 0.3 * x.cos() + 0.05 * (2.0 * x).sin()).unwrap(),
            config(&[0.9, 1.7, 2.4], 0, 0),
        ),
    ];
    let mut pass = true;
    let mut drift: f64 = 0.0;
    for (q1, q2, cfg) in &pairs {
        let mut base = None;
        for t in [1.0, 0.5, 0.25, 0.125] {
            let rep = theorem32_bound(&q1.scaled(t), &q2.scaled(t), cfg, 4.0, 0.0, 64).unwrap();
            pass &= rep.holds;
            let b = *base.get_or_insert(rep.rhs);
            drift = drift.max(((rep.rhs - b).exp() - 1.0).abs());
        }
    }
    pass &= drift <= 1e-6;
    outcome(pass, format!("holds on both sweeps: {pass}, max relative change of the ratio = {drift:.2e} (tol 1e-6)"))
}

fn cartwright() -> Outcome {
    let one = Potential::from_fn(256, |_| 1.0).unwrap();
    let g = GhatFunction::new(one, Potential::zero(256), config(&[1.0], 0, 0));
    let f = |z: C64| g.value(z);
    let all = ZeroSet::collect(&f, 200.0, 10.0, true).unwrap();
    let c = g.at_zero();
    let grid: Vec<f64> = (0..=200).map(|j| -10.0 + 0.1 * j as f64).collect();
    let scale = grid.iter().map(|&x| f(C64::new(x, 0.0)).norm()).fold(0.0, f64::max);
    let err = |r: f64| {
        let zs = all.truncated(r).unwrap();
        grid.iter()
            .map(|&x| (cartwright_product(&zs, c, C64::new(x, 0.0)).unwrap() - f(C64::new(x, 0.0))).norm())
            .fold(0.0, f64::max)
            / scale
    };
    let (e100, e200) = (err(100.0), err(200.0));
    outcome(
        e200 <= 0.05 && e200 < e100,
        format!("error {e200:.3e} at R=200 (tol 5%), {e100:.3e} at R=100"),
    )
}

fn interpolation() -> Outcome {
    let sys = sine_system::<f64>(60);
    let sinc = |z: C64| if z.norm() == 0.0 { C64::new(1.0, 0.0) } else { (z * 0.9).sin() / (z * 0.9) };
    let coeffs: Vec<C64> = (-60..=60).map(|k| sinc(C64::new(k as f64 * PI, 0.0))).collect();
    let exact = (-60..=60).all(|k: i64| {
        sine_type_interpolate(&sys, &coeffs, C64::new(k as f64 * PI, 0.0)).unwrap() == coeffs[(k + 60) as usize]
    });
    let worst = (0..=1000)
        .map(|j| {
            let z = C64::new(-5.0 + 0.01 * j as f64, 0.0);
            (sine_type_interpolate(&sys, &coeffs, z).unwrap() - sinc(z)).norm()
        })
        .fold(0.0, f64::max);
    outcome(exact && worst <= 1e-4, format!("nodes exact: {exact}, max error on [-5,5] = {worst:.2e} (tol 1e-4)"))
}

fn corollary_trend() -> Outcome {
    let q1 = Potential::from_fn(256, |x: f64| 1.0 + 0.3 * x.cos()).unwrap();
    let q2 = Potential::from_fn(256, |x: f64| 1.0 + 0.3 * x.cos() + 0.05 * (2.0 * x).sin()).unwrap();
    let rep = corollary_bound(&q1, &q2, &config(&[1.0, 2.0], 0, 0), 4.0, 64, &CorollaryOptions::default()).unwrap();
    let mve = rep.steps.iter().map(|s| s.mean_value_error).fold(0.0, f64::max);
    let dists: Vec<String> = rep.steps.iter().map(|s| format!("{:.3e}", s.zero_distance)).collect();
    outcome(
        rep.monotone && mve < 0.1,
        format!("distances [{}], monotone: {}, worst mean-value deviation {mve:.2e} (tol 0.1)", dists.join(", "), rep.monotone),
    )
}

fn main() {
    let criteria: [(usize, fn() -> Outcome); 10] = [
        (1, unperturbed_spectra),
        (2, determinant_equivalence),
        (3, oracle_spectra),
        (4, winding_counts),
        (5, support_recovery),
        (6, plancherel_polya),
        (7, theorem_bound),
        (8, cartwright),
        (9, interpolation),
        (10, corollary_trend),
    ];
    let mut failed = 0;
    for (n, check) in criteria {
        let start = Instant::now();
        let o = check();
        let secs = start.elapsed().as_secs_f64();
        println!("criterion {n}: {} {} [{secs:.1} s]", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        failed += usize::from(!o.pass);
    }
    println!("{} of 10 criteria passed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
