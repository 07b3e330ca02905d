//! Integer-order Bessel functions of the first kind and their positive zeros.
//!
//! `J_n(x)` is evaluated with the power series while its terms decrease
//! monotonically (`x^2/4 <= n + 1`), and with Miller's backward recurrence
//! normalised by `J_0 + 2 * sum J_{2k} = 1` otherwise.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Largest order accepted by [`bessel_j`].
pub const MAX_ORDER: u32 = 100_000;

/// Absolute bracket width at which a zero is accepted.
pub const ZERO_TOL: f64 = 1e-11;

const RESCALE: f64 = 1e250;

pub fn bessel_j(order: u32, x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("J_{order}({x}): x must be positive")));
    }
    if order > MAX_ORDER {
        return Err(Error::Domain(format!("order {order} exceeds {MAX_ORDER}")));
    }
    Ok(if use_series(order, x) {
        series(order, x)
    } else {
        miller(order, x).1
    })
}

/// `(J_n(x), J_n'(x))` for `x > 0`.
pub fn bessel_j_with_derivative(order: u32, x: f64) -> (f64, f64) {
    if use_series(order, x) {
        let j = series(order, x);
        let jp = if order == 0 {
            -series(1, x)
        } else {
            0.5 * (series(order - 1, x) - series(order + 1, x))
        };
        (j, jp)
    } else {
        let (below, j, above) = miller(order, x);
        let jp = if order == 0 { -above } else { 0.5 * (below - above) };
        (j, jp)
    }
}

fn use_series(order: u32, x: f64) -> bool {
    0.25 * x * x <= order as f64 + 1.0
}

fn ln_factorial(n: u32) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

fn series(order: u32, x: f64) -> f64 {
    let n = order as f64;
    let half = 0.5 * x;
    let lead = (n * half.ln() - ln_factorial(order)).exp();
    if lead == 0.0 {
        return 0.0;
    }
    let q = -half * half;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..200 {
        let kf = k as f64;
        term *= q / (kf * (n + kf));
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    lead * sum
}

/// Backward recurrence returning `(J_{n-1}, J_n, J_{n+1})`; the first entry
/// is zero when `n = 0`.
fn miller(order: u32, x: f64) -> (f64, f64, f64) {
    let n = order as usize;
    let top = n.max(x as usize);
    let mut start = top + 30 + (40.0 * top as f64).sqrt() as usize;
    start += start % 2;

    let two_over_x = 2.0 / x;
    let mut above = 0.0_f64; // J_{k+1}
    let mut current = 1e-300_f64; // J_k
    let mut norm = 0.0_f64;
    let mut picked = (0.0, 0.0, 0.0);
    let mut k = start;
    loop {
        if k == n + 1 {
            picked.2 = current;
        } else if k == n {
            picked.1 = current;
        } else if n > 0 && k == n - 1 {
            picked.0 = current;
        }
        if k % 2 == 0 {
            norm += if k == 0 { current } else { 2.0 * current };
        }
        if k == 0 {
            break;
        }
        let below = k as f64 * two_over_x * current - above;
        above = current;
        current = below;
        k -= 1;
        if current.abs() > RESCALE {
            current /= RESCALE;
            above /= RESCALE;
            norm /= RESCALE;
            picked.0 /= RESCALE;
            picked.1 /= RESCALE;
            picked.2 /= RESCALE;
        }
    }
    (picked.0 / norm, picked.1 / norm, picked.2 / norm)
}

/// McMahon's large-zero expansion for `j_{n,k}`.
pub fn mcmahon_estimate(order: u32, index: usize) -> f64 {
    let mu = 4.0 * (order as f64).powi(2);
    let beta = (index as f64 + 0.5 * order as f64 - 0.25) * PI;
    let b8 = 8.0 * beta;
    beta - (mu - 1.0) / b8
        - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * b8.powi(3))
        - 32.0 * (mu - 1.0) * (83.0 * mu * mu - 982.0 * mu + 3779.0) / (15.0 * b8.powi(5))
}

/// Refines a zero of `J_order` inside `[lo, hi]` (sign change required) with
/// Newton steps that fall back to bisection whenever they leave the bracket.
pub fn refine_zero(order: u32, index: usize, mut lo: f64, mut hi: f64, guess: f64) -> Result<f64> {
    let f_lo = bessel_j_with_derivative(order, lo).0;
    let positive_lo = f_lo > 0.0;
    let mut x = if guess > lo && guess < hi {
        guess
    } else {
        0.5 * (lo + hi)
    };
    for _ in 0..200 {
        let (f, fp) = bessel_j_with_derivative(order, x);
        if f == 0.0 {
            return Ok(x);
        }
        if (f > 0.0) == positive_lo {
            lo = x;
        } else {
            hi = x;
        }
        let newton = x - f / fp;
        let step_ok = fp != 0.0 && newton > lo && newton < hi;
        let next = if step_ok { newton } else { 0.5 * (lo + hi) };
        if (next - x).abs() < 0.25 * ZERO_TOL || hi - lo < ZERO_TOL {
            return Ok(next);
        }
        x = next;
    }
    Err(Error::ZeroFinder {
        order,
        index,
        lo,
        hi,
    })
}

/// All positive zeros of `J_order` that are `<= x_max`, ascending.
///
/// Consecutive zeros of `J_n` (`n >= 1`) are more than `pi` apart and
/// `j_{n,1} > n`, so stepping by one from `n` (and from `previous + pi`
/// after each zero) isolates every zero in its own bracket.
pub fn bessel_zeros_below(order: u32, x_max: f64) -> Result<Vec<f64>> {
    let mut zeros = Vec::new();
    let mut lo = (order as f64).max(0.5);
    let mut f_lo = bessel_j_with_derivative(order, lo).0;
    while lo < x_max {
        let hi = (lo + 1.0).min(x_max);
        let f_hi = bessel_j_with_derivative(order, hi).0;
        if f_hi == 0.0 || (f_lo > 0.0) != (f_hi > 0.0) {
            let index = zeros.len() + 1;
            let z = if f_hi == 0.0 {
                hi
            } else {
                refine_zero(order, index, lo, hi, mcmahon_estimate(order, index))?
            };
            zeros.push(z);
            lo = if order >= 1 { z + PI * (1.0 - 1e-9) } else { hi };
            f_lo = bessel_j_with_derivative(order, lo).0;
        } else {
            lo = hi;
            f_lo = f_hi;
        }
    }
    Ok(zeros)
}
