//! Sine integral `Si(x) = int_0^x sin(t)/t dt`.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

/// `Si(x)` for real `x`, absolute error below `1e-12`.
///
/// Power series for `|x| <= 2`; above that, the continued fraction of
/// `E1(i x)` evaluated with the modified Lentz method.
pub fn sine_integral(x: f64) -> f64 {
    if x < 0.0 {
        return -sine_integral(-x);
    }
    if x <= 2.0 {
        let x2 = x * x;
        let mut term = x;
        let mut sum = x;
        let mut k = 0.0;
        loop {
            k += 1.0;
            term *= -x2 / ((2.0 * k) * (2.0 * k + 1.0));
            let add = term / (2.0 * k + 1.0);
            sum += add;
            if add.abs() <= 1e-17 * sum.abs() {
                break;
            }
        }
        return sum;
    }
    const TINY: f64 = 1e-300;
    let mut b = Complex64::new(1.0, x);
    let mut c = Complex64::new(1.0 / TINY, 0.0);
    let mut d = b.inv();
    let mut h = d;
    for i in 2..10_000 {
        let a = -((i - 1) as f64).powi(2);
        b += 2.0;
        d = (d * a + b).inv();
        c = b + c.inv() * a;
        let del = c * d;
        h *= del;
        if (del - 1.0).norm_sqr() < 1e-32 {
            break;
        }
    }
    h *= Complex64::new(x.cos(), -x.sin());
    FRAC_PI_2 + h.im
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Composite Simpson on the integrand.
    fn si_quadrature(x: f64) -> f64 {
        let n = 200_000;
        let h = x / n as f64;
        let f = |t: f64| if t == 0.0 { 1.0 } else { t.sin() / t };
        let mut s = f(0.0) + f(x);
        for i in 1..n {
            s += f(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        s * h / 3.0
    }

    #[test]
    fn matches_quadrature_on_both_branches() {
        for x in [0.01, 0.5, 1.0, 1.99, 2.01, 3.7, 10.0, 16.1, 25.0, 80.0, 300.0] {
            let a = sine_integral(x);
            let b = si_quadrature(x);
            assert!((a - b).abs() < 1e-11, "Si({x}) = {a}, quadrature {b}");
        }
        assert_eq!(sine_integral(0.0), 0.0);
        assert!((sine_integral(-2.0) + sine_integral(2.0)).abs() < 1e-15);
        assert!((sine_integral(1e6) - FRAC_PI_2).abs() < 2e-6);
    }
}
