use glvar_core::po::stationary::action;
use glvar_core::po::*;
use glvar_core::spectra::{rb_levels, RectangularBilliard};
use glvar_core::{AspectRatioDistribution, Error};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn single(mmax: Option<u32>) -> PoSumConfig {
    PoSumConfig { mmax, ..Default::default() }
}

fn ensemble(sigma: f64, count: usize, mmax: Option<u32>) -> PoSumConfig {
    PoSumConfig {
        mmax,
        averaging: Averaging::Ensemble(AspectRatioDistribution::new(1.0, sigma, count, 11).unwrap()),
        ..Default::default()
    }
}

#[test]
fn correlation_and_interval_variance_add_up_to_rigidity() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for trial in 0..100 {
        let alpha = rng.random_range(0.7..1.4);
        let eps = rng.random_range(1e3..2e4);
        let omega = rng.random_range(0.0..60.0);
        let cfg = PoSumConfig { mmax: Some([1, 3, 8, 20][trial % 4]), tolerance: 0.5, ..Default::default() };
        let th = PoTheory::new(alpha, &cfg).unwrap();
        let d3 = th.delta3_saturation(eps);
        let k = th.k_staircase(eps, omega);
        let s = th.sigma_interval(eps, omega);
        assert!((k + 0.5 * s - d3).abs() <= 1e-12 * d3, "{alpha} {eps} {omega}");
    }
    let th = PoTheory::new(1.0, &ensemble(0.05, 40, Some(6))).unwrap();
    for (eps, omega) in [(1.5e3, 0.7), (8e3, 12.0)] {
        let d3 = th.delta3_saturation(eps);
        let gap = th.k_staircase(eps, omega) + 0.5 * th.sigma_interval(eps, omega) - d3;
        assert!(gap.abs() <= 1e-12 * d3);
    }
}

#[test]
fn zero_width_limits() {
    let th = PoTheory::new(1.1, &single(None)).unwrap();
    for eps in [1e3, 1e4] {
        assert_eq!(th.sigma_interval(eps, 0.0), 0.0);
        let d3 = th.delta3_saturation(eps);
        assert!((th.k_staircase(eps, 0.0) - d3).abs() <= 1e-14 * d3);
    }
}

#[test]
fn even_in_omega_and_bounded() {
    let th = PoTheory::new(0.93, &single(Some(16))).unwrap();
    let eps = 5e3;
    let d3 = th.delta3_saturation(eps);
    for k in 0..=200 {
        let w = 0.25 * k as f64;
        let s = th.sigma_interval(eps, w);
        assert_eq!(s, th.sigma_interval(eps, -w));
        assert_eq!(th.k_staircase(eps, w), th.k_staircase(eps, -w));
        assert!(s >= 0.0);
        assert!(th.k_staircase(eps, w).abs() <= d3 * (1.0 + 1e-12));
    }
}

#[test]
fn small_omega_slope_is_minus_one_half() {
    let th = PoTheory::new(1.0, &ensemble(0.05, 50, None)).unwrap();
    let omegas: Vec<f64> = (0..=10).map(|k| 0.5 + 0.25 * k as f64).collect();
    let k = th.k_staircase_curve(1e4, &omegas);
    let slope = fit_slope(&omegas, &k);
    assert!((slope + 0.5).abs() < 0.05, "slope {slope}");
    for (w, v) in omegas.iter().zip(&k) {
        assert!((th.small_omega(1e4, *w) - v).abs() < 0.1);
    }
}

fn fit_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}

#[test]
fn rigidity_grows_as_root_energy() {
    let th = PoTheory::new(1.0, &single(None)).unwrap();
    let eps: Vec<f64> = (0..=20).map(|k| 1e3 * 100f64.powf(k as f64 / 20.0)).collect();
    let d3 = th.delta3_saturation_curve(&eps);
    let lx: Vec<f64> = eps.iter().map(|e| e.ln()).collect();
    let ly: Vec<f64> = d3.iter().map(|d| d.ln()).collect();
    let slope = fit_slope(&lx, &ly);
    assert!((slope - 0.5).abs() < 0.05, "exponent {slope}");
}

#[test]
fn family_weight_follows_winding_scaling() {
    for alpha in [0.8, 1.0, 1.25] {
        for eps in [1e3, 4e4] {
            let terms = enumerate_orbits(alpha, eps, 6);
            for t in &terms {
                let (m1, m2) = (t.winding.0 as f64, t.winding.1 as f64);
                let w2 = (t.delta * t.amplitude / t.period).powi(2);
                let shape = (m1 * m1 * alpha.sqrt() + m2 * m2 / alpha.sqrt()).powf(-1.5);
                let ratio = w2 / (t.delta * t.delta * eps.sqrt() * shape);
                // (ab)^2 pi^-3 (4 pi)^-3/2 with ab = 2 pi
                let expected = 4.0 * std::f64::consts::PI.powi(-1) * (4.0 * std::f64::consts::PI).powf(-1.5);
                assert!((ratio - expected).abs() < 1e-12 * expected);
            }
        }
    }
}

#[test]
fn adaptive_truncation_is_self_consistent() {
    for alpha in [0.9, 1.0, 1.15] {
        let m = adaptive_mmax(alpha, 1e-3, true).unwrap();
        let lo = PoTheory::new(alpha, &single(Some(m))).unwrap().delta3_saturation(7e3);
        let hi = PoTheory::new(alpha, &single(Some(2 * m))).unwrap().delta3_saturation(7e3);
        assert!(((hi - lo) / hi).abs() < 1e-3);
        if m > 1 {
            match PoTheory::new(alpha, &single(Some(m / 2))) {
                Err(Error::Truncation { .. }) => {}
                other => panic!("halved mmax accepted: {other:?}"),
            }
        }
    }
    let bare = PoSumConfig { tail_completion: false, ..single(Some(64)) };
    assert!(matches!(PoTheory::new(1.0, &bare), Err(Error::Truncation { .. })));
}

#[test]
fn delta_n_converges_with_mmax_at_single_alpha() {
    let eps = 2e3;
    let cfg = |m| PoSumConfig { mmax: Some(m), ..Default::default() };
    let a = PoTheory::new(1.2, &cfg(64)).unwrap().delta_n(eps);
    let b = PoTheory::new(1.2, &cfg(128)).unwrap().delta_n(eps);
    let scale = PoTheory::new(1.2, &cfg(64)).unwrap().delta3_saturation(eps).sqrt();
    assert!((a - b).abs() < 0.1 * scale, "{a} vs {b}");
}

#[test]
fn delta_n_tracks_direct_staircase() {
    for alpha in [0.8, 1.0, 1.3] {
        let spectrum = rb_levels(&RectangularBilliard::new(alpha).unwrap(), 1.2e3, 1 << 24).unwrap();
        let th = PoTheory::new(alpha, &single(Some(96))).unwrap();
        let grid: Vec<f64> = (0..400).map(|k| 1e3 + 0.25 * k as f64 + 0.125).collect();
        let po = th.delta_n_curve(&grid);
        let direct: Vec<f64> = grid.iter().map(|&e| spectrum.count_le(e) as f64 - e).collect();
        let r = correlation(&po, &direct);
        assert!(r > 0.8, "alpha {alpha}: correlation {r}");
    }
}

fn correlation(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    sxy / (sxx * syy).sqrt()
}

#[test]
fn full_mode_is_nonnegative_and_oscillates_about_rigidity() {
    let th = PoTheory::new(1.0, &ensemble(0.05, 100, Some(8))).unwrap();
    let grid: Vec<f64> = (0..=900).map(|k| 1e3 + 10.0 * k as f64).collect();
    let curves = th.interference_curves(&grid);
    let d3 = th.delta3_saturation_curve(&grid);
    assert!(curves.full.iter().all(|&v| v >= 0.0));
    let signs = curves
        .full
        .iter()
        .zip(&d3)
        .map(|(f, d)| f - d)
        .collect::<Vec<_>>()
        .windows(2)
        .filter(|w| w[0].signum() != w[1].signum())
        .count();
    assert!(signs >= 10, "{signs} sign changes");
    for ((c, f), d) in curves.connected.iter().zip(&curves.full).zip(&curves.delta_n) {
        assert!((f - d * d - c).abs() < 1e-12 * f.max(1.0));
    }
    assert_eq!(curves.diagonal, d3);
    assert_eq!(curves.full, th.global_variance_curve_mode(&grid, Mode::Full));
    assert_eq!(global_variance_po(5e3, &ensemble(0.05, 100, Some(8))).unwrap(), th.global_variance(5e3));
    assert!(global_variance_po(5e3, &single(Some(8))).is_err());
}

#[test]
fn dropped_self_cosine_is_small_after_averaging() {
    let grid: Vec<f64> = (0..=90).map(|k| 1e3 + 100.0 * k as f64).collect();
    let base = ensemble(0.05, 200, Some(8));
    let with = PoSumConfig { include_self_cosine: true, ..base.clone() };
    let a = PoTheory::new(1.0, &base).unwrap().global_variance_curve_mode(&grid, Mode::Diagonal);
    let b = PoTheory::new(1.0, &with).unwrap().global_variance_curve_mode(&grid, Mode::Diagonal);
    let rms = (a.iter().zip(&b).map(|(x, y)| (x - y).powi(2)).sum::<f64>() / a.len() as f64).sqrt();
    let mean = a.iter().sum::<f64>() / a.len() as f64;
    assert!(rms < 0.25 * mean, "self-cosine rms {rms} vs rigidity {mean}");
    assert!(rms > 0.0);
}

#[test]
fn averaging_suppresses_non_stationary_cross_terms() {
    // |<cos(S_M - S_M')>| over transposed pairs, whose phase moves with alpha;
    // low energy keeps the phase spread comparable to one radian at small width
    let strength = |sigma: f64, pair: (u32, u32)| {
        let dist = AspectRatioDistribution::new(1.0, sigma, 4000, 3).unwrap();
        let alphas = glvar_core::sample_aspect_ratios(&dist).unwrap();
        let eps = 40.0;
        let (m1, m2) = pair;
        let mean: f64 = alphas
            .iter()
            .map(|&a| (action((m1, m2), a, eps) - action((m2, m1), a, eps)).cos())
            .sum::<f64>()
            / alphas.len() as f64;
        mean.abs()
    };
    for pair in [(0, 1), (0, 2), (1, 2)] {
        let s: Vec<f64> = [0.02, 0.05, 0.1].iter().map(|&w| strength(w, pair)).collect();
        assert!(s[0] > s[1] && s[1] > s[2], "{pair:?}: {s:?}");
        assert!(s[2] < 0.1, "{pair:?}: {s:?}");
    }
}

#[test]
fn permuted_pair_sum_is_stationary_and_difference_is_not() {
    for p in stationary_phase_scan(1.0, 1e4, 5) {
        if p.winding.0 != p.winding.1 {
            assert!(p.d_plus.abs() < 1e-10);
            assert!(p.d_minus.abs() > 0.0);
        }
    }
    let s = action((1, 1), 1.03, 1e4) - action((1, 1), 1.03, 1e4);
    assert_eq!(s, 0.0);
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..20 {
        let m1 = rng.random_range(0..6u32);
        let m2 = rng.random_range((m1 + 1)..8u32);
        let alpha = rng.random_range(0.8..1.25);
        let eps = rng.random_range(1e3..1e5);
        let h = 1e-5;
        let scan = stationary_phase_scan(alpha, eps, 8);
        let p = scan.iter().find(|p| p.winding == (m1, m2)).unwrap();
        let s_minus = |a: f64| action((m1, m2), a, eps) - action((m2, m1), a, eps);
        let s_plus = |a: f64| action((m1, m2), a, eps) + action((m2, m1), a, eps);
        let fd_m = (s_minus(alpha + h) - s_minus(alpha - h)) / (2.0 * h);
        let fd_p = (s_plus(alpha + h) - s_plus(alpha - h)) / (2.0 * h);
        let scale = p.s_plus;
        assert!((fd_m - p.d_minus).abs() < 1e-7 * scale);
        assert!((fd_p - p.d_plus).abs() < 1e-7 * scale);
    }
}
