mod common;

use common::*;
use frozen_spectral::charfn::{char_closed, char_det, ghat, ghat_at_zero, CharacteristicFunction, GhatFunction, Method};
use frozen_spectral::contour::{collect_zeros_strip, count_zeros_disk, StripOptions};
use frozen_spectral::entire::{
    cartwright_product, function_type, indicator, zero_density, ZeroSet,
};
use frozen_spectral::instability::{
    l2_norm_real_axis, mean_value_error, parseval_bound, theorem32_bound, transform_zeros,
};
use frozen_spectral::model::{fourier_coefficients, paley_wiener_transform, Potential, Window};
use frozen_spectral::roots::find_roots;
use frozen_spectral::spectrum::{match_points, match_spectra, real_eigenvalues, shooting_eigenvalues};
use frozen_spectral::Error;
use std::f64::consts::PI;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[test]
fn ghat_of_constant_pair_at_origin() {
    let one = Potential::from_fn(256, |_| 1.0).unwrap();
    let zero = Potential::zero(256);
    let cfg = config(&[PI / 2.0], 0, 0);
    // -pi a^2/2 + a pi^2/2 at a = pi/2
    let exact = PI.powi(3) / 8.0;
    let g0 = ghat_at_zero(&one, &zero, &cfg).unwrap();
    assert!(rel(g0, c(exact, 0.0)) < 1e-12, "{g0}");
    let g = ghat(&one, &zero, &cfg, c(1e-6, 0.0)).unwrap();
    assert!(rel(g, c(exact, 0.0)) < 1e-6, "{g}");
}

#[test]
fn ghat_is_continuous_at_origin() {
    let mut r = rng(11);
    for n in 1..=4 {
        let q1 = band_limited(&mut r, 1.0, 128);
        let q2 = band_limited(&mut r, 1.0, 128);
        for (alpha, beta) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            let cfg = config(&frozen_points(&mut r, n), alpha, beta);
            let g0 = ghat_at_zero(&q1, &q2, &cfg).unwrap();
            let g = ghat(&q1, &q2, &cfg, c(1e-4, 0.0)).unwrap();
            assert!((g - g0).norm() <= 1e-6 * g0.norm().max(1.0), "{g} vs {g0}");
        }
    }
}

#[test]
fn first_fourier_coefficient_of_one() {
    let one = Potential::from_fn(64, |_| 1.0).unwrap();
    let coeffs = fourier_coefficients(&one, 4).unwrap();
    let oracle = simpson(|t| c(0.0, -t).exp(), 0.0, PI, 4000) / (2.0 * PI);
    assert!((coeffs.get(1) - oracle).norm() < 1e-12);
    assert!((coeffs.get(1) - c(0.0, -1.0 / PI)).norm() < 1e-12);
    assert!((coeffs.get(0) - c(0.5, 0.0)).norm() < 1e-15);
}

#[test]
fn transform_of_interval_indicator() {
    let chi = Window::indicator(0.0, PI);
    let rho = c(1.0, 1.0);
    let exact = (C64::new(1.0, 0.0) - (-C64::i() * rho * PI).exp()) / (C64::i() * rho * 2.0 * PI);
    assert!(rel(paley_wiener_transform(&chi, rho).unwrap(), exact) < 1e-13);
    assert!(paley_wiener_transform(&chi, c(2.0, 0.0)).unwrap().norm() < 1e-15);
}

/// Dirichlet closed form evaluated with Simpson on the interpolated potential.
fn dirichlet_oracle(q: &Potential<f64>, a: &[f64], rho: C64) -> C64 {
    let s = |x: f64| (rho * x).sin();
    let n = 20_000;
    let kernel = |x: f64| simpson(|t| (rho * (x - t)).sin() * q.eval(t), 0.0, x, n);
    let sp = s(PI) / rho;
    let inner: C64 = a.iter().map(|&ai| kernel(ai)).sum();
    let outer = kernel(PI);
    let sum_s: C64 = a.iter().map(|&ai| s(ai)).sum();
    sp - s(PI) / (rho * rho) * inner + sum_s / (rho * rho) * outer
}

#[test]
fn dirichlet_closed_form_against_simpson() {
    let q = Potential::from_fn(2048, f64::cos).unwrap();
    let cfg = config(&[1.0, 2.0], 0, 0);
    for rho in [c(3.3, 0.0), c(7.1, 0.8), c(0.4, -1.5)] {
        let oracle = dirichlet_oracle(&q, &[1.0, 2.0], rho);
        assert!(rel(char_closed(&q, &cfg, rho).unwrap(), oracle) < 1e-7, "{rho}");
        assert!(rel(char_det(&q, &cfg, rho).unwrap(), oracle) < 1e-7, "{rho}");
    }
}

#[test]
fn scan_and_shooting_agree_on_documented_cases() {
    let q = Potential::from_fn(256, |x: f64| 0.1 * x.cos()).unwrap();
    let cfg = config(&[PI / 2.0], 0, 0);
    let (a, b) = (real_eigenvalues(&q, &cfg, 10).unwrap(), shooting_eigenvalues(&q, &cfg, 10).unwrap());
    for (x, y) in a.lambdas.iter().zip(&b.lambdas) {
        assert!((x - y).abs() < 1e-6, "{x} vs {y}");
    }
    let q = Potential::from_fn(256, |x| x).unwrap();
    let cfg = config(&[1.0, 2.0], 0, 0);
    let (a, b) = (real_eigenvalues(&q, &cfg, 8).unwrap(), shooting_eigenvalues(&q, &cfg, 8).unwrap());
    for (x, y) in a.lambdas.iter().zip(&b.lambdas) {
        assert!((x - y).abs() < 1e-6, "{x} vs {y}");
    }
    assert!(match_spectra(&a, &b).distance < 1e-5);
}

#[test]
fn ghat_disk_count_matches_scan_and_strip() {
    let cosq = Potential::from_fn(256, f64::cos).unwrap();
    let g = GhatFunction::new(cosq, Potential::zero(256), config(&[1.0], 0, 0));
    let f = |z: C64| g.value(z);
    let zc = count_zeros_disk(&f, 20.0, 512).unwrap();
    let r = zc.radius;
    let reals = find_roots(&|x: f64| g.value(c(x, 0.0)).re, -r, r, 0.01);
    let strip = collect_zeros_strip(&f, &StripOptions::new(r).real_on_axis(true)).unwrap();
    let complex = strip.iter().filter(|z| z.im.abs() > 1e-8).count();
    assert_eq!(complex % 2, 0);
    assert_eq!(zc.count, reals.len() + complex, "radius {r}");
}

#[test]
fn disk_count_bounds_real_zero_count() {
    let cfg = config(&[1.0, 2.0], 0, 0);
    let zero = CharacteristicFunction::new(Potential::zero(64), cfg.clone(), Method::Green);
    let n = count_zeros_disk(&|z| zero.value(z), 10.5, 512).unwrap().count;
    assert_eq!(n, 20);
    let mut r = rng(5);
    for _ in 0..3 {
        let q = band_limited(&mut r, 1.0, 256);
        let d = CharacteristicFunction::new(q, cfg.clone(), Method::Green);
        let zc = count_zeros_disk(&|z| d.value(z), 10.5, 512).unwrap();
        let reals = find_roots(&|x: f64| d.value(c(x, 0.0)).re, -zc.radius, zc.radius, 0.01);
        assert!(zc.count >= reals.len());
    }
}

#[test]
fn dirichlet_roots_approach_integers() {
    let mut r = rng(17);
    let q = band_limited(&mut r, 1.0, 256);
    let cfg = config(&[0.7, 2.2], 0, 0);
    let s = real_eigenvalues(&q, &cfg, 40).unwrap();
    let dev: Vec<f64> = s.rhos.iter().enumerate().map(|(i, &x)| (i + 1) as f64 * (x - (i + 1) as f64).abs()).collect();
    let c_fit = dev[4..15].iter().cloned().fold(0.0, f64::max);
    assert!(dev[15..].iter().all(|&d| d <= 2.0 * c_fit), "{c_fit} {dev:?}");
}

#[test]
fn ghat_growth_constant_does_not_grow() {
    let mut r = rng(23);
    let q1 = band_limited(&mut r, 1.0, 256);
    let q2 = band_limited(&mut r, 1.0, 256);
    let cfg = config(&[0.8, 1.9], 0, 0);
    let g = GhatFunction::new(q1, q2, cfg);
    let sigma = PI + 1.9;
    let k_at = |r0: f64| {
        let mut k: f64 = 0.0;
        for j in 0..200 {
            let x = r0 * (1.0 + j as f64 / 200.0);
            for y in [-4.0, -1.0, 0.0, 1.0, 4.0] {
                let z = c(x, y);
                k = k.max(g.value(z).norm() * z.norm_sqr() / (sigma * y.abs()).exp());
            }
        }
        k
    };
    let (k50, k500) = (k_at(50.0), k_at(500.0));
    assert!(k50 > 0.0 && k500 <= 1.5 * k50, "{k50} {k500}");
}

#[test]
fn indicator_and_type_of_explicit_functions() {
    let radii: Vec<f64> = (1..=10).map(|k| 10.0 * k as f64).collect();
    let ty = function_type(
        &|z: C64| (z * PI).sin() * z.sin(),
        &(0..16).map(|j| j as f64 * PI / 8.0 - PI).collect::<Vec<_>>(),
        &radii,
    )
    .unwrap();
    assert!((ty - (PI + 1.0)).abs() < 0.03 * (PI + 1.0), "{ty}");
    let ty = function_type(&|z: C64| z.sin() + (z * 2.0).sin(), &[PI / 2.0, -PI / 2.0], &radii).unwrap();
    assert!((ty - 2.0).abs() < 0.04, "{ty}");
    // indicator of a product never exceeds the sum
    for j in 0..24 {
        let th = j as f64 * PI / 12.0 - PI + 0.01;
        let hf = indicator(&|z: C64| (z * PI).sin(), th, &radii).unwrap().h;
        let hg = indicator(&|z: C64| (z * 0.5).cos() + 2.0, th, &radii).unwrap().h;
        let hfg = indicator(&|z: C64| (z * PI).sin() * ((z * 0.5).cos() + 2.0), th, &radii).unwrap().h;
        assert!(hfg <= hf + hg + 1e-6, "{th}: {hfg} > {hf} + {hg}");
    }
}

#[test]
fn ghat_indicator_respects_growth_bound() {
    let mut r = rng(29);
    let g = GhatFunction::new(band_limited(&mut r, 1.0, 256), band_limited(&mut r, 1.0, 256), config(&[1.3, 2.5], 0, 0));
    let radii: Vec<f64> = (1..=10).map(|k| 12.0 * k as f64).collect();
    let h = indicator(&|z| g.value(z), PI / 2.0, &radii).unwrap().h;
    assert!(h <= (PI + 2.5) * 1.02, "{h}");
}

#[test]
fn density_is_additive_for_explicit_zero_sets() {
    let r = 300.0;
    let ints: Vec<C64> = (1..=300).flat_map(|k| [c(k as f64, 0.0), c(-(k as f64), 0.0)]).collect();
    let pis: Vec<C64> = (1..=95).flat_map(|k| [c(k as f64 * PI, 0.0), c(-(k as f64) * PI, 0.0)]).collect();
    let f = ZeroSet::new(ints.clone(), r).unwrap();
    let g = ZeroSet::new(pis.clone(), r).unwrap();
    let fg = ZeroSet::new(ints.into_iter().chain(pis).collect(), r).unwrap();
    let (df, dg, dfg) = (
        zero_density(&f, r).unwrap(),
        zero_density(&g, r).unwrap(),
        zero_density(&fg, r).unwrap(),
    );
    assert!(((df + dg) - dfg).abs() < 0.03 * dfg);
    assert!((dfg - (2.0 + 2.0 / PI)).abs() < 0.03 * dfg);
}

/// Pair whose difference function factors as `4 sin(r/2) sin(r pi/2) sin(r (pi-1)/2) / r^3`.
fn factored_pair() -> GhatFunction<f64> {
    let one = Potential::from_fn(256, |_| 1.0).unwrap();
    GhatFunction::new(one, Potential::zero(256), config(&[1.0], 0, 0))
}

#[test]
fn factored_pair_matches_its_product_formula() {
    let g = factored_pair();
    for x in [0.3, 2.7, 11.9, 40.1] {
        let z = c(x, 0.4);
        let f = (z * 0.5).sin() * (z * PI / 2.0).sin() * (z * (PI - 1.0) / 2.0).sin() * 4.0 / (z * z * z);
        assert!(rel(g.value(z), f) < 1e-9, "{x}");
    }
}

#[test]
fn ghat_density_matches_indicator_width() {
    let g = factored_pair();
    let f = |z: C64| g.value(z);
    let zs = ZeroSet::collect(&f, 150.0, 10.0, true).unwrap();
    let radii: Vec<f64> = (1..=10).map(|k| 12.0 * k as f64).collect();
    let width = indicator(&f, PI / 2.0, &radii).unwrap().h + indicator(&f, -PI / 2.0, &radii).unwrap().h;
    let d = zero_density(&zs, 150.0).unwrap();
    assert!((d - width / PI).abs() < 0.03 * d, "{d} vs {}", width / PI);
}

#[test]
fn cartwright_error_does_not_grow_with_radius() {
    let g = factored_pair();
    let f = |z: C64| g.value(z);
    let all = ZeroSet::collect(&f, 200.0, 10.0, true).unwrap();
    let c0 = g.at_zero();
    let grid: Vec<f64> = (0..=200).map(|j| -10.0 + 0.1 * j as f64).collect();
    let scale = grid.iter().map(|&x| f(c(x, 0.0)).norm()).fold(0.0, f64::max);
    let err = |r: f64| {
        let zs = all.truncated(r).unwrap();
        grid.iter()
            .map(|&x| (cartwright_product(&zs, c0, c(x, 0.0)).unwrap() - f(c(x, 0.0))).norm())
            .fold(0.0, f64::max)
            / scale
    };
    let (e50, e100, e200) = (err(50.0), err(100.0), err(200.0));
    assert!(e100 <= e50 && e200 <= e100, "{e50} {e100} {e200}");
}

#[test]
fn cosine_and_sine_transforms_have_twice_the_exponential_density() {
    let w = |t: f64| 1.0 + t.cos();
    let quad = |k: &dyn Fn(C64, f64) -> C64, z: C64| simpson(|t| k(z, t) * w(t), 0.0, PI, 6000);
    let fe = |z: C64| quad(&|z, t| (-C64::i() * z * t).exp(), z);
    let fc = |z: C64| quad(&|z, t| (z * t).cos(), z);
    let fs = |z: C64| quad(&|z, t| (z * t).sin(), z);
    let r = 200.0;
    let n = |f: &(dyn Fn(C64) -> C64 + Sync)| {
        let zc = count_zeros_disk(&f, r, 2048).unwrap();
        zc.count as f64 / zc.radius
    };
    let (de, dc, ds) = (n(&fe), n(&fc), n(&fs));
    assert!((dc - ds).abs() < 0.05 * dc, "{dc} {ds}");
    assert!((dc - 2.0 * de).abs() < 0.05 * dc, "{dc} {de}");
}

#[test]
fn ghat_norm_is_stable_under_cutoff_doubling() {
    let one = Potential::from_fn(256, |_| 1.0).unwrap();
    let g = GhatFunction::new(one, Potential::zero(256), config(&[PI / 2.0], 0, 0));
    let f = |z: C64| g.value(z);
    let a = l2_norm_real_axis(&f, 16.0, 4).unwrap();
    let b = l2_norm_real_axis(&f, 32.0, 4).unwrap();
    assert!(a.norm.is_finite() && a.norm > 0.0);
    assert!((a.norm - b.norm).abs() < 0.005 * b.norm, "{} {}", a.norm, b.norm);
}

#[test]
fn parseval_chain_for_random_pairs() {
    let mut r = rng(31);
    for _ in 0..20 {
        let n = r_usize(&mut r);
        let cfg = config(&frozen_points(&mut r, n), 0, 0);
        let q1 = band_limited(&mut r, 1.0, 256);
        let q2 = band_limited(&mut r, 1.0, 256);
        let p = parseval_bound(&q1, &q2, &cfg, 64).unwrap();
        assert!(p.lhs <= p.rhs, "{p:?}");
    }
    let one = Potential::from_fn(256, |_| 1.0).unwrap();
    let p = parseval_bound(&one, &Potential::zero(256), &config(&[PI / 2.0], 0, 0), 256).unwrap();
    assert!(p.lhs <= p.rhs);
}

fn r_usize(r: &mut impl rand::Rng) -> usize {
    r.gen_range(1..=3)
}

#[test]
fn theorem32_examples() {
    let cosq = Potential::from_fn(256, f64::cos).unwrap();
    let cfg = config(&[1.0, 2.0], 0, 0);
    let rep = theorem32_bound(&cosq, &Potential::zero(256), &cfg, 4.0, 0.0, 64).unwrap();
    assert!(rep.holds, "{rep:?}");
    assert!(matches!(
        theorem32_bound(&cosq, &cosq, &cfg, 4.0, 0.0, 64),
        Err(Error::Undefined(_))
    ));
}

#[test]
fn small_window_perturbation_moves_zeros_by_mean_value_rule() {
    let q1 = Potential::from_fn(256, |_| 1.0).unwrap();
    let q2 = Potential::from_fn(256, |t: f64| 1.0 + 0.01 * t.cos()).unwrap();
    let (z1, z2) = (transform_zeros(&q1, 29.0, 10.0).unwrap(), transform_zeros(&q2, 29.0, 10.0).unwrap());
    assert_eq!(match_points(&z1, &z1).distance, 0.0);
    let m = match_points(&z1, &z2);
    assert!(m.max_gap > 1e-4 && m.max_gap < 5e-2, "{}", m.max_gap);
    let pw = frozen_spectral::model::PaleyWiener::new(&q1);
    let pairs: Vec<(C64, C64)> = m.pairs.iter().map(|&(i, j, _)| (z1[i], z2[j])).collect();
    assert!(mean_value_error(&|z| pw.eval(z), &pairs) < 0.1);
}
