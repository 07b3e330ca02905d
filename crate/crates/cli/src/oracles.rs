//! Slow independent reference implementations used by the acceptance suite.

use std::f64::consts::PI;

use glvar_core::spectra::{bessel_j, WeylCounter};
use glvar_core::units::rectangle_sides;
use glvar_core::Spectrum;

/// Unfolded rectangle levels from a plain double loop over quantum numbers.
pub fn naive_rectangle(alpha: f64, emax: f64) -> Vec<f64> {
    let (a, b) = rectangle_sides(alpha);
    let counter = WeylCounter::rectangle(a, b);
    let e_bound = 2.0 * counter.invert(emax) + 10.0;
    let n_max = |side: f64| ((2.0 * e_bound).sqrt() * side / PI).ceil() as u64 + 2;
    let mut out = Vec::new();
    for n1 in 1..=n_max(a) {
        for n2 in 1..=n_max(b) {
            let e = 0.5 * PI * PI * ((n1 * n1) as f64 / (a * a) + (n2 * n2) as f64 / (b * b));
            let x = counter.mean(e);
            if x <= emax {
                out.push(x);
            }
        }
    }
    out.sort_by(f64::total_cmp);
    out
}

/// Zeros of `J_order` in `(0, x_max)` by sign scan and bisection.
pub fn bisect_bessel_zeros(order: u32, x_max: f64) -> Vec<f64> {
    let f = |x: f64| bessel_j(order, x).expect("order in range");
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
    }
    out
}

const GL_X: [f64; 5] = [
    -0.906_179_845_938_664,
    -0.538_469_310_105_683,
    0.0,
    0.538_469_310_105_683,
    0.906_179_845_938_664,
];
const GL_W: [f64; 5] = [
    0.236_926_885_056_189,
    0.478_628_670_499_366,
    0.568_888_888_888_889,
    0.478_628_670_499_366,
    0.236_926_885_056_189,
];

/// Least-squares rigidity in the uncentred basis `{1, x}` with every
/// integral done by Gauss-Legendre on sub-intervals between jumps, using
/// about `nodes` staircase evaluations.
pub fn delta3_quadrature(s: &Spectrum, eps: f64, len: f64, nodes: usize) -> f64 {
    let (lo, hi) = (eps - 0.5 * len, eps + 0.5 * len);
    let mut cuts = vec![lo];
    cuts.extend(s.levels.iter().copied().filter(|&x| x > lo && x < hi));
    cuts.push(hi);
    let per = (nodes / (5 * (cuts.len() - 1))).max(1);
    let mut m = [0.0f64; 6];
    for w in cuts.windows(2) {
        let h = (w[1] - w[0]) / per as f64;
        for k in 0..per {
            let a = w[0] + k as f64 * h;
            for (xi, wi) in GL_X.iter().zip(GL_W) {
                let x = a + 0.5 * h * (xi + 1.0);
                let n = s.count_le(x) as f64;
                let wt = 0.5 * h * wi;
                m[0] += wt;
                m[1] += wt * x;
                m[2] += wt * x * x;
                m[3] += wt * n;
                m[4] += wt * n * x;
                m[5] += wt * n * n;
            }
        }
    }
    let det = m[0] * m[2] - m[1] * m[1];
    let b = (m[0] * m[4] - m[1] * m[3]) / det;
    let a = (m[3] - b * m[1]) / m[0];
    (m[5] - 2.0 * a * m[3] - 2.0 * b * m[4] + a * a * m[0] + 2.0 * a * b * m[1] + b * b * m[2]) / m[0]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_lowest_levels() {
        // E(1,1) = pi/2 in raw units; the unfolded value is positive and small
        let levels = naive_rectangle(1.0, 5.0);
        assert!(!levels.is_empty());
        assert!(levels.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn first_zero_of_j0() {
        let z = bisect_bessel_zeros(0, 3.0);
        assert_eq!(z.len(), 1);
        assert!((z[0] - 2.404_825_557_695_773).abs() < 1e-12);
    }
}
