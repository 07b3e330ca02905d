use glvar_core::spectra::{
    bessel_j, bessel_zeros_below, qcb_levels, rb_levels, QuarterCircularBilliard,
    RectangularBilliard, WeylCounter,
};
use glvar_core::units::rectangle_sides;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CAP: usize = 1 << 24;

/// Every `(n1, n2)` with a generous bound, mapped by the smooth counter.
fn naive_rectangle(alpha: f64, emax: f64) -> Vec<f64> {
    let (a, b) = rectangle_sides(alpha);
    let counter = WeylCounter::rectangle(a, b);
    let e_bound = 2.0 * counter.invert(emax) + 10.0;
    let mut out = Vec::new();
    let n_max = |side: f64| ((2.0 * e_bound).sqrt() * side / std::f64::consts::PI).ceil() as u64 + 2;
    for n1 in 1..=n_max(a) {
        for n2 in 1..=n_max(b) {
            let e = 0.5 * std::f64::consts::PI.powi(2) * ((n1 * n1) as f64 / (a * a) + (n2 * n2) as f64 / (b * b));
            let x = counter.mean(e);
            if x <= emax {
                out.push(x);
            }
        }
    }
    out.sort_by(f64::total_cmp);
    out
}

#[test]
fn rectangle_levels_match_double_loop() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..20 {
        let alpha = rng.random_range(0.3..3.0);
        let emax = rng.random_range(20.0..1000.0);
        let fast = rb_levels(&RectangularBilliard::new(alpha).unwrap(), emax, CAP).unwrap();
        let slow = naive_rectangle(alpha, emax);
        assert_eq!(fast.len(), slow.len(), "alpha {alpha} emax {emax}");
        for (x, y) in fast.levels.iter().zip(&slow) {
            assert!((x - y).abs() < 1e-8, "alpha {alpha}: {x} vs {y}");
        }
    }
}

#[test]
fn unfolded_rectangle_has_unit_spacing() {
    for alpha in [0.5, 1.0, 1.7] {
        let s = rb_levels(&RectangularBilliard::new(alpha).unwrap(), 5000.0, CAP).unwrap();
        let grid: Vec<f64> = (0..2000).map(|k| 2000.0 + 1.5 * k as f64).collect();
        let mean: f64 = grid.iter().map(|&e| s.count_le(e) as f64 - e).sum::<f64>() / grid.len() as f64;
        assert!(mean.abs() < 0.5, "alpha {alpha}: mean offset {mean}");
        assert!(s.levels.windows(2).all(|w| w[0] < w[1]));
    }
}

fn bisect_zeros(order: u32, x_max: f64) -> Vec<f64> {
    let f = |x: f64| bessel_j(order, x).unwrap();
    let step = 0.01;
    let mut out = Vec::new();
    let mut lo = 0.5 * step;
    let mut f_lo = f(lo);
    while lo < x_max {
        let hi = (lo + step).min(x_max);
        let f_hi = f(hi);
        if f_lo == 0.0 {
            out.push(lo);
        } else if f_lo * f_hi < 0.0 {
            let (mut a, mut b, mut fa) = (lo, hi, f_lo);
            for _ in 0..200 {
                let m = 0.5 * (a + b);
                let fm = f(m);
                if fm * fa <= 0.0 {
                    b = m;
                } else {
                    a = m;
                    fa = fm;
                }
            }
            out.push(0.5 * (a + b));
        }
        lo = hi;
        f_lo = f_hi;
        if hi >= x_max {
            break;
        }
    }
    out
}

#[test]
fn bessel_zeros_match_bisection() {
    for order in [0, 1, 2, 4, 7, 12, 20, 33, 50] {
        let fast = bessel_zeros_below(order, 90.0).unwrap();
        let slow = bisect_zeros(order, 90.0);
        assert_eq!(fast.len(), slow.len(), "order {order}");
        for (x, y) in fast.iter().zip(&slow) {
            assert!((x - y).abs() < 1e-9, "order {order}: {x} vs {y}");
        }
    }
}

#[test]
fn quarter_circle_levels_are_bessel_roots() {
    let qcb = QuarterCircularBilliard::default();
    let labelled = qcb.labelled_levels(300.0, CAP).unwrap();
    for &(e, m, _) in &labelled {
        assert_eq!(m % 2, 0);
        let x = qcb.radius * (2.0 * e).sqrt();
        assert!(bessel_j(m, x).unwrap().abs() < 1e-9);
    }
    let s = qcb_levels(&qcb, 2000.0, CAP).unwrap();
    let grid: Vec<f64> = (0..1000).map(|k| 1000.0 + k as f64 + 0.5).collect();
    let mean: f64 = grid.iter().map(|&e| s.count_le(e) as f64 - e).sum::<f64>() / grid.len() as f64;
    assert!(mean.abs() < 1.0, "mean offset {mean}");
}
