//! Spectral rigidity: least-squares deviation of the staircase from a line.
//!
//! On a window `[c - L/2, c + L/2]` with `t = x - c`, the best line
//! `A + B t` has `A = I0 / L` and `B = 12 I1 / L^3`, where
//! `Ik = int N(x) t^k dt` and `J = int N^2 dt`, giving
//!
//! `Delta3 = J / L - (I0 / L)^2 - 12 I1^2 / L^4`.
//!
//! The staircase is constant between levels, so every integral is a finite
//! sum over the levels inside the window.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::spectrum::Spectrum;
use crate::stats::staircase::check_range;

/// `Delta3(epsilon; L)` of a single spectrum.
pub fn delta3(spectrum: &Spectrum, epsilon: f64, length: f64) -> Result<f64> {
    if !(length > 0.0) {
        return Err(Error::Domain(format!("window length must be positive, got {length}")));
    }
    let lo = epsilon - 0.5 * length;
    let hi = epsilon + 0.5 * length;
    check_range(spectrum, hi)?;
    let levels = &spectrum.levels;
    let first = levels.partition_point(|&x| x <= lo);
    let last = levels.partition_point(|&x| x <= hi);
    let inside = &levels[first..last];
    Ok(window_rigidity(inside, epsilon, length))
}

/// Rigidity of the staircase that steps up by one at each of `inside`
/// (sorted, all within the window) and is zero at the window start.
fn window_rigidity(inside: &[f64], center: f64, length: f64) -> f64 {
    let half = 0.5 * length;
    // constant offsets do not change the fit; centre the step values
    let offset = 0.5 * inside.len() as f64;
    let mut i0 = 0.0;
    let mut i1 = 0.0;
    let mut j = 0.0;
    let mut t_prev = -half;
    let mut value = -offset;
    for &x in inside.iter().chain(std::iter::once(&(center + half))) {
        let t = (x - center).clamp(-half, half);
        let dt = t - t_prev;
        i0 += value * dt;
        i1 += value * 0.5 * (t * t - t_prev * t_prev);
        j += value * value * dt;
        t_prev = t;
        value += 1.0;
    }
    let a = i0 / length;
    (j / length - a * a - 12.0 * i1 * i1 / length.powi(4)).max(0.0)
}

/// Ensemble mean of `Delta3(epsilon; L)`.
pub fn delta3_ensemble(ensemble: &[Spectrum], epsilon: f64, length: f64) -> Result<f64> {
    if ensemble.is_empty() {
        return Err(Error::InsufficientEnsemble { count: 0, needed: 1 });
    }
    let values: Vec<f64> = ensemble
        .par_iter()
        .map(|s| delta3(s, epsilon, length))
        .collect::<Result<_>>()?;
    Ok(values.iter().sum::<f64>() / values.len() as f64)
}

/// `count` lengths spaced geometrically from `l_min` to `l_max` inclusive.
pub fn geometric_grid(l_min: f64, l_max: f64, count: usize) -> Vec<f64> {
    assert!(count >= 2 && l_min > 0.0 && l_max > l_min);
    let ratio = (l_max / l_min).ln() / (count - 1) as f64;
    (0..count).map(|i| l_min * (ratio * i as f64).exp()).collect()
}

/// Saturation estimate together with the curve it was read from.
#[derive(Clone, Debug, PartialEq)]
pub struct Plateau {
    pub value: f64,
    pub onset: f64,
    pub lengths: Vec<f64>,
    pub curve: Vec<f64>,
}

/// Relative step below which successive rigidity values count as flat.
pub const PLATEAU_STEP: f64 = 0.02;

/// Evaluates the ensemble rigidity on `lengths` (ascending). The plateau
/// starts at the first length whose successor differs by less than
/// [`PLATEAU_STEP`]; the reported value is the median over the top decade
/// of lengths at or beyond that onset.
pub fn delta3_saturation_num(ensemble: &[Spectrum], epsilon: f64, lengths: &[f64]) -> Result<Plateau> {
    if lengths.len() < 2 {
        return Err(Error::Domain("need at least two window lengths".into()));
    }
    let curve: Vec<f64> = lengths
        .iter()
        .map(|&l| delta3_ensemble(ensemble, epsilon, l))
        .collect::<Result<_>>()?;
    plateau_of(epsilon, lengths, curve)
}

/// Plateau of a precomputed rigidity curve (see [`delta3_saturation_num`]).
pub fn plateau_of(epsilon: f64, lengths: &[f64], curve: Vec<f64>) -> Result<Plateau> {
    let l_min = lengths[0];
    let l_max = *lengths.last().expect("non-empty");
    let no_plateau = || Error::NoPlateau { epsilon, l_min, l_max };
    let onset = curve
        .windows(2)
        .position(|w| (w[1] - w[0]).abs() < PLATEAU_STEP * w[0].abs())
        .ok_or_else(no_plateau)?;
    let top = 0.1 * l_max;
    let mut tail: Vec<f64> = lengths
        .iter()
        .zip(&curve)
        .enumerate()
        .filter(|&(i, (&l, _))| i >= onset && l >= top * (1.0 - 1e-12))
        .map(|(_, (_, &v))| v)
        .collect();
    if tail.is_empty() {
        return Err(no_plateau());
    }
    tail.sort_by(f64::total_cmp);
    let mid = tail.len() / 2;
    let value = if tail.len() % 2 == 1 {
        tail[mid]
    } else {
        0.5 * (tail[mid - 1] + tail[mid])
    };
    Ok(Plateau {
        value,
        onset: lengths[onset],
        lengths: lengths.to_vec(),
        curve,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::SystemKind;
    use proptest::prelude::*;

    fn ruler(n: usize) -> Spectrum {
        let levels = (1..=n).map(|k| k as f64).collect();
        Spectrum::new(SystemKind::Rectangular, 1.0, levels, n as f64).unwrap()
    }

    /// Generic least squares in the uncentred basis `{1, x}`, with every
    /// integral done by 5-point Gauss-Legendre on sub-intervals between
    /// staircase jumps (about `nodes` evaluations in total).
    fn quadrature(s: &Spectrum, eps: f64, len: f64, nodes: usize) -> f64 {
        const X: [f64; 5] = [
            -0.906_179_845_938_664,
            -0.538_469_310_105_683,
            0.0,
            0.538_469_310_105_683,
            0.906_179_845_938_664,
        ];
        const W: [f64; 5] = [
            0.236_926_885_056_189,
            0.478_628_670_499_366,
            0.568_888_888_888_889,
            0.478_628_670_499_366,
            0.236_926_885_056_189,
        ];
        let (lo, hi) = (eps - 0.5 * len, eps + 0.5 * len);
        let mut cuts = vec![lo];
        cuts.extend(s.levels.iter().copied().filter(|&x| x > lo && x < hi));
        cuts.push(hi);
        let per = (nodes / (5 * (cuts.len() - 1))).max(1);
        // moments of 1, x, x^2 and of N, N x, N^2
        let mut m = [0.0f64; 6];
        for w in cuts.windows(2) {
            let h = (w[1] - w[0]) / per as f64;
            for k in 0..per {
                let a = w[0] + k as f64 * h;
                for (xi, wi) in X.iter().zip(W) {
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
        (m[5] - 2.0 * a * m[3] - 2.0 * b * m[4] + a * a * m[0] + 2.0 * a * b * m[1] + b * b * m[2])
            / m[0]
    }

    /// Plain midpoint rule, no knowledge of the jumps.
    fn midpoint(s: &Spectrum, eps: f64, len: f64, points: usize) -> f64 {
        let h = len / points as f64;
        let (mut n0, mut n1, mut nn, mut t2) = (0.0, 0.0, 0.0, 0.0);
        for i in 0..points {
            let t = -0.5 * len + (i as f64 + 0.5) * h;
            let n = s.count_le(eps + t) as f64;
            n0 += n;
            n1 += n * t;
            nn += n * n;
            t2 += t * t;
        }
        let p = points as f64;
        let a = n0 / p;
        nn / p - a * a - n1 * n1 / (t2 * p)
    }

    #[test]
    fn picket_fence_saturates_at_one_twelfth() {
        let s = ruler(5000);
        let v = delta3(&s, 2500.0, 1000.0).unwrap();
        assert!((v - 1.0 / 12.0).abs() < 1e-6, "{v}");
        let lengths = geometric_grid(2.0, 2000.0, 25);
        let p = delta3_saturation_num(std::slice::from_ref(&s), 2500.0, &lengths).unwrap();
        assert!((p.value - 1.0 / 12.0).abs() < 1e-6, "{}", p.value);
    }

    #[test]
    fn window_past_emax_is_rejected() {
        let s = ruler(100);
        assert!(matches!(delta3(&s, 90.0, 30.0), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn no_plateau_on_growing_curve() {
        let lengths = geometric_grid(1.0, 100.0, 10);
        let curve: Vec<f64> = lengths.iter().map(|l| l * l).collect();
        assert!(matches!(plateau_of(5.0, &lengths, curve), Err(Error::NoPlateau { .. })));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn closed_form_matches_quadrature(
            gaps in prop::collection::vec(0.05f64..2.5, 20..80),
            center_frac in 0.3f64..0.7,
            len_frac in 0.1f64..0.5,
        ) {
            let mut levels = Vec::with_capacity(gaps.len());
            let mut x = 0.0;
            for g in gaps { x += g; levels.push(x); }
            let emax = x;
            let s = Spectrum::new(SystemKind::Rectangular, 1.0, levels, emax).unwrap();
            let eps = center_frac * emax;
            let len = len_frac * emax;
            let exact = delta3(&s, eps, len).unwrap();
            let approx = quadrature(&s, eps, len, 10_000);
            prop_assert!((exact - approx).abs() < 1e-6, "{} vs {}", exact, approx);
            let rough = midpoint(&s, eps, len, 100_000);
            prop_assert!((exact - rough).abs() < 1e-2 * exact.max(1e-2), "{} vs {}", exact, rough);
        }

        #[test]
        fn translation_invariant(
            gaps in prop::collection::vec(0.1f64..2.0, 30..60),
            shift in -50.0f64..50.0,
        ) {
            let mut levels = Vec::new();
            let mut x = 100.0;
            for g in gaps { x += g; levels.push(x); }
            let emax = x;
            let center = 0.5 * (100.0 + emax);
            let len = 0.5 * (emax - 100.0);
            let a = Spectrum::new(SystemKind::Rectangular, 1.0, levels.clone(), emax).unwrap();
            let b = Spectrum::new(
                SystemKind::Rectangular, 1.0,
                levels.iter().map(|l| l + shift).collect(), emax + shift,
            ).unwrap();
            let da = delta3(&a, center, len).unwrap();
            let db = delta3(&b, center + shift, len).unwrap();
            prop_assert!((da - db).abs() < 1e-9);
        }
    }
}
