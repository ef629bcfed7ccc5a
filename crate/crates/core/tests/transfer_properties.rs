mod common;

use common::{e, gauss_integral, gauss_legendre, random_box_union, random_frequencies, random_positive_affine};
use num_complex::Complex64;
use proptest::prelude::*;
use pwbasis_core::domain::{make_domain, AxisBox, Domain};
use pwbasis_core::numerics::seeded_rng;
use pwbasis_core::paley_wiener::{
    bump_window, shannon_reconstruct, translation_gram, verify_frame_transfer, verify_riesz_transfer, zd_periodization,
    AxisWindow, BandlimitedSignal, SpectralWeight, WindowProfile,
};
use pwbasis_core::spectra::{quadrature_gram, FrequencySet, Provenance};

fn affine_scenario(seed: u64) -> (Domain, FrequencySet, SpectralWeight, f64, Vec<f64>) {
    let mut rng = seeded_rng(seed);
    let d = 1 + rng.below(2);
    let omega = random_box_union(&mut rng, d);
    let freqs = random_frequencies(&mut rng, d, 8);
    let (offset, slope) = random_positive_affine(&mut rng, d);
    let w = SpectralWeight::affine(&omega, offset, slope.clone(), 8).unwrap();
    (omega, freqs, w, offset, slope)
}

#[test]
fn translation_gram_matches_brute_force_parseval() {
    for seed in 0..40 {
        let (omega, freqs, w, offset, slope) = affine_scenario(seed);
        let g = translation_gram(&omega, &freqs, &w).unwrap();
        assert_eq!(g.provenance, Provenance::ClosedForm);
        for i in 0..freqs.len() {
            for j in 0..freqs.len() {
                let (a, b) = (freqs.point(i), freqs.point(j));
                let oracle = gauss_integral(&omega, 40, |x| {
                    let phi: f64 = offset + x.iter().zip(&slope).map(|(p, q)| p * q).sum::<f64>();
                    e(x, a) * e(x, b).conj() * (phi * phi)
                });
                assert!((g.matrix.get(i, j) - oracle).norm() <= 1e-8, "seed {seed}");
            }
        }
    }
}

#[test]
fn quadrature_route_matches_the_node_sum() {
    let omega = make_domain(vec![AxisBox::interval(0.25, 0.75).unwrap()]).unwrap();
    let freqs = FrequencySet::integer_range(-3, 3).unwrap();
    let w = bump_window(&omega, 1.0, 24).unwrap();
    let g = translation_gram(&omega, &freqs, &w).unwrap();
    assert_eq!(g.provenance, Provenance::Quadrature);
    let rule = w.rule();
    for i in 0..freqs.len() {
        for j in 0..freqs.len() {
            let oracle: Complex64 = (0..rule.len())
                .map(|k| {
                    let x = rule.node(k);
                    e(x, freqs.point(i)) * e(x, freqs.point(j)).conj() * (rule.weights()[k] * w.values()[k].norm_sqr())
                })
                .sum();
            assert!((g.matrix.get(i, j) - oracle).norm() <= 1e-14);
        }
    }
}

#[test]
fn sandwich_holds_on_random_affine_scenarios() {
    for seed in 0..120 {
        let (omega, freqs, w, _, _) = affine_scenario(1000 + seed);
        let r = verify_riesz_transfer(&omega, &freqs, &w).unwrap();
        assert!(r.sandwich_holds, "seed {seed}: {r:?}");
        assert!(r.converse_holds, "seed {seed}: {r:?}");
    }
}

#[test]
fn sandwich_holds_on_the_quadrature_route() {
    for seed in 0..40 {
        let mut rng = seeded_rng(5000 + seed);
        let omega = random_box_union(&mut rng, 1);
        let freqs = random_frequencies(&mut rng, 1, 8);
        let (p, q) = (rng.range(0.5, 2.0), rng.range(-1.0, 1.0));
        let w = SpectralWeight::from_fn(&omega, 12, |x| Complex64::new(p + 0.3 * (5.0 * x[0]).sin(), q)).unwrap();
        let r = verify_riesz_transfer(&omega, &freqs, &w).unwrap();
        assert_eq!(r.route, Provenance::Quadrature);
        assert!(r.passed(), "seed {seed}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn scaling_the_weight_scales_the_bounds(seed in any::<u64>(), re in -3.0f64..3.0, im in -3.0f64..3.0) {
        let c = Complex64::new(re, im);
        prop_assume!(c.norm() > 0.1);
        let (omega, freqs, w, _, _) = affine_scenario(seed);
        let base = verify_riesz_transfer(&omega, &freqs, &w).unwrap();
        let scaled = verify_riesz_transfer(&omega, &freqs, &w.scaled(c)).unwrap();
        let c2 = c.norm_sqr();
        prop_assert!((scaled.trans_bounds.lower - c2 * base.trans_bounds.lower).abs() <= 1e-9 * c2 * base.trans_bounds.upper);
        prop_assert!((scaled.trans_bounds.upper - c2 * base.trans_bounds.upper).abs() <= 1e-9 * c2 * base.trans_bounds.upper);
        prop_assert_eq!(scaled.sandwich_holds, base.sandwich_holds);
        prop_assert_eq!(scaled.lower_margin >= 0.0, base.lower_margin >= 0.0);
        prop_assert_eq!(scaled.upper_margin >= 0.0, base.upper_margin >= 0.0);
    }

    #[test]
    fn shannon_coefficient_energy_is_monotone_and_bounded(seed in any::<u64>()) {
        let mut rng = seeded_rng(seed);
        let coeffs: Vec<Complex64> = (0..64).map(|_| Complex64::new(rng.normal(), rng.normal())).collect();
        let f = BandlimitedSignal::new(&Domain::unit_interval_centered(), 64, coeffs).unwrap();
        let mut previous = 0.0;
        for n in [0, 1, 4, 10, 20, 31] {
            let r = shannon_reconstruct(&f, n, &[]).unwrap();
            prop_assert!(r.coefficient_energy >= previous);
            prop_assert!(r.coefficient_energy <= r.signal_energy * (1.0 + 1e-8));
            previous = r.coefficient_energy;
        }
    }
}

/// `f^(xi) = cos^2(pi xi) * (c0 + c1 xi + c2 xi^2 + c3 xi^3)`: vanishes to
/// second order at the band edges, so `f` decays like `|x|^-3`.
fn smooth_spectrum(seed: u64) -> impl Fn(f64) -> Complex64 {
    let mut rng = seeded_rng(seed);
    let c: Vec<Complex64> = (0..4).map(|_| Complex64::new(rng.normal(), rng.normal())).collect();
    move |xi| {
        let envelope = (std::f64::consts::PI * xi).cos().powi(2);
        (c[0] + c[1] * xi + c[2] * xi * xi + c[3] * xi * xi * xi) * envelope
    }
}

#[test]
fn shannon_error_decreases_with_truncation() {
    let band = Domain::unit_interval_centered();
    let (t, w) = gauss_legendre(64);
    for seed in 0..5 {
        let spectrum = smooth_spectrum(seed);
        let signal = BandlimitedSignal::from_fn(&band, 512, |x| spectrum(x[0])).unwrap();
        let xs: Vec<f64> = (0..=400).map(|i| -5.0 + 0.025 * i as f64).collect();
        // Inverse transform by Gauss-Legendre on [-1/2, 1/2].
        let truth: Vec<Complex64> = xs
            .iter()
            .map(|&x| {
                t.iter()
                    .zip(&w)
                    .map(|(&s, &wk)| {
                        let xi = 0.5 * s;
                        spectrum(xi) * Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * x * xi) * (0.5 * wk)
                    })
                    .sum()
            })
            .collect();
        let energy: f64 = truth.iter().map(|z| z.norm_sqr()).sum();
        let mut previous = f64::INFINITY;
        for n in [16, 32, 64, 128] {
            let r = shannon_reconstruct(&signal, n, &xs).unwrap();
            let err: f64 = r.reconstruction.iter().zip(&truth).map(|(a, b)| (a - b).norm_sqr()).sum();
            let relative = (err / energy).sqrt();
            assert!(relative < previous, "seed {seed}, N = {n}");
            if n == 64 {
                assert!(relative < 1e-2, "seed {seed}: {relative}");
            }
            previous = relative;
        }
    }
}

#[test]
fn periodization_agrees_with_translate_gram_on_random_indicators() {
    let mut rng = seeded_rng(77);
    for _ in 0..30 {
        let lo = rng.range(-2.0, 2.0);
        let integer = rng.below(2) == 0;
        let len = if integer { (1 + rng.below(3)) as f64 } else { rng.range(0.3, 2.7) };
        let p = WindowProfile::new(vec![AxisWindow::Indicator { lo, hi: lo + len }], 1.0 / len.sqrt());
        let r = zd_periodization(&p, 64, 3).unwrap();
        assert!(r.agrees, "lo {lo} len {len}");
        if integer {
            assert!(r.verdict);
        }
    }
}

#[test]
fn bump_frame_transfer_has_positive_margins() {
    let omega = make_domain(vec![AxisBox::interval(0.25, 0.75).unwrap()]).unwrap();
    let freqs = FrequencySet::integer_range(-8, 8).unwrap();
    // Six nodes: with 4, 8 or 16 equally spaced nodes the frame operator has
    // tied eigenvalues and the lower margin is zero up to rounding.
    let w = bump_window(&omega, 1.0, 6).unwrap();
    let r = verify_frame_transfer(&omega, &freqs, &w).unwrap();
    assert!(r.lower_margin > 0.1 * r.frame_bounds.lower);
    assert!(r.upper_margin > 0.0);
    assert!(r.passed());
    assert!(!r.caveat.is_empty());
}

#[test]
fn frame_transfer_with_holes_in_the_support() {
    for seed in 0..20 {
        let mut rng = seeded_rng(9000 + seed);
        let omega = random_box_union(&mut rng, 1);
        let freqs = random_frequencies(&mut rng, 1, 8);
        let cut = rng.range(-0.6, 1.2);
        let w = SpectralWeight::from_fn(&omega, 6, |x| {
            Complex64::new(if x[0] < cut { 0.0 } else { 1.0 + 0.5 * x[0].sin() }, 0.2)
        })
        .unwrap();
        if w.support_count() == 0 {
            continue;
        }
        let r = verify_frame_transfer(&omega, &freqs, &w).unwrap();
        assert!(r.passed(), "seed {seed}");
    }
}

#[test]
fn exponential_quadrature_gram_agrees_with_translation_gram_for_unit_weight() {
    let omega = make_domain(vec![AxisBox::interval(0.0, 1.0).unwrap(), AxisBox::interval(1.5, 2.0).unwrap()]).unwrap();
    let freqs = FrequencySet::integer_range(-2, 2).unwrap();
    let w = SpectralWeight::from_fn(&omega, 10, |_| Complex64::new(1.0, 0.0)).unwrap();
    let t = translation_gram(&omega, &freqs, &w).unwrap();
    let q = quadrature_gram(w.rule(), &freqs, None).unwrap();
    assert_eq!(t.matrix, q.matrix);
}
