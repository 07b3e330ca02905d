//! Phase sums and differences of transposed family pairs and their
//! sensitivity to the aspect ratio.

use std::f64::consts::PI;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseDerivatives {
    /// `(M1, M2)` with `M1 < M2`; its partner is `(M2, M1)`.
    pub winding: (u32, u32),
    pub s_plus: f64,
    pub s_minus: f64,
    pub d_plus: f64,
    pub d_minus: f64,
}

/// `S_M = 2 sqrt(2 eps Q_M(alpha))` with `Q_M = 2 pi (M1^2 alpha^(1/2) + M2^2 alpha^(-1/2))`.
pub fn action(winding: (u32, u32), alpha: f64, epsilon: f64) -> f64 {
    2.0 * (2.0 * epsilon * q_of(winding, alpha)).sqrt()
}

fn q_of((m1, m2): (u32, u32), alpha: f64) -> f64 {
    let r = alpha.sqrt();
    2.0 * PI * ((m1 as f64).powi(2) * r + (m2 as f64).powi(2) / r)
}

fn action_derivative(winding: (u32, u32), alpha: f64, epsilon: f64) -> f64 {
    let (m1, m2) = (winding.0 as f64, winding.1 as f64);
    let r = alpha.sqrt();
    let dq = PI * (m1 * m1 / r - m2 * m2 / (r * alpha));
    action(winding, alpha, epsilon) * dq / (2.0 * q_of(winding, alpha))
}

/// Analytic `dS_pm / d alpha` for every transposed pair with `M1 < M2 <= mmax`.
pub fn stationary_phase_scan(alpha: f64, epsilon: f64, mmax: u32) -> Vec<PhaseDerivatives> {
    let mut out = Vec::new();
    for m1 in 0..=mmax {
        for m2 in (m1 + 1)..=mmax {
            let m = (m1, m2);
            let t = (m2, m1);
            let (s, st) = (action(m, alpha, epsilon), action(t, alpha, epsilon));
            let (d, dt) = (
                action_derivative(m, alpha, epsilon),
                action_derivative(t, alpha, epsilon),
            );
            out.push(PhaseDerivatives {
                winding: m,
                s_plus: s + st,
                s_minus: s - st,
                d_plus: d + dt,
                d_minus: d - dt,
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn analytic_matches_central_difference() {
        for alpha in [0.9, 1.0, 1.1] {
            for eps in [1e3, 1e4] {
                let h = 1e-6;
                let lo = stationary_phase_scan(alpha - h, eps, 6);
                let hi = stationary_phase_scan(alpha + h, eps, 6);
                for (p, (l, u)) in stationary_phase_scan(alpha, eps, 6).iter().zip(lo.iter().zip(&hi)) {
                    let fp = (u.s_plus - l.s_plus) / (2.0 * h);
                    let fm = (u.s_minus - l.s_minus) / (2.0 * h);
                    let scale = p.s_plus;
                    assert!((fp - p.d_plus).abs() < 1e-6 * scale);
                    assert!((fm - p.d_minus).abs() < 1e-6 * scale);
                }
            }
        }
    }

    #[test]
    fn sum_is_stationary_at_the_square() {
        for p in stationary_phase_scan(1.0, 5e3, 8) {
            assert!(p.d_plus.abs() < 1e-9 * p.s_plus);
            assert!(p.d_minus.abs() > 1.0);
            assert!(p.s_minus.abs() < 1e-9 * p.s_plus);
        }
    }
}
