//! Smooth level counting and unfolding.

use std::f64::consts::{PI, SQRT_2};

use crate::error::{Error, Result};

/// Gap inserted between levels whose unfolded values coincide.
pub const TIE_SPLIT: f64 = 1e-9;

/// Mean staircase `<N(E)> = area_coeff * E - perimeter_coeff * sqrt(E) + constant`
/// for a Dirichlet billiard with `m = hbar = 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeylCounter {
    pub area_coeff: f64,
    pub perimeter_coeff: f64,
    pub constant: f64,
}

impl WeylCounter {
    /// Area, perimeter and the corner/curvature constant of a billiard.
    pub fn from_geometry(area: f64, perimeter: f64, constant: f64) -> Self {
        Self {
            area_coeff: area / (2.0 * PI),
            perimeter_coeff: perimeter * SQRT_2 / (4.0 * PI),
            constant,
        }
    }

    /// Rectangle with area `2 pi`; four right-angle corners give `1/4`.
    pub fn rectangle(a: f64, b: f64) -> Self {
        Self::from_geometry(a * b, 2.0 * (a + b), 0.25)
    }

    /// Quarter disc: three right-angle corners (`3/16`) plus the arc
    /// curvature term (`1/24`).
    pub fn quarter_circle(radius: f64) -> Self {
        Self::from_geometry(
            0.25 * PI * radius * radius,
            radius * (2.0 + 0.5 * PI),
            3.0 / 16.0 + 1.0 / 24.0,
        )
    }

    pub fn mean(&self, energy: f64) -> f64 {
        self.area_coeff * energy - self.perimeter_coeff * energy.sqrt() + self.constant
    }

    pub fn density(&self, energy: f64) -> f64 {
        self.area_coeff - 0.5 * self.perimeter_coeff / energy.sqrt()
    }

    /// Raw energy below which the counter is not increasing.
    pub fn monotone_from(&self) -> f64 {
        let r = 0.5 * self.perimeter_coeff / self.area_coeff;
        r * r
    }

    /// Raw energy `E` with `mean(E) = epsilon`, on the increasing branch.
    pub fn invert(&self, epsilon: f64) -> f64 {
        // mean is a quadratic in s = sqrt(E)
        let c = self.constant - epsilon;
        let disc = self.perimeter_coeff * self.perimeter_coeff - 4.0 * self.area_coeff * c;
        let s = (self.perimeter_coeff + disc.max(0.0).sqrt()) / (2.0 * self.area_coeff);
        let mut e = s * s;
        // one Newton polish against rounding in the closed form
        let d = self.density(e);
        if d > 0.0 {
            e -= (self.mean(e) - epsilon) / d;
        }
        e
    }
}

/// Maps sorted raw energies through the counter. Coincident outputs are
/// pulled apart by [`TIE_SPLIT`] so the result is strictly increasing with
/// the same length and order.
pub fn unfold(raw_levels: &[f64], counter: &WeylCounter) -> Result<Vec<f64>> {
    let floor = counter.monotone_from();
    let mut out = Vec::with_capacity(raw_levels.len());
    for (i, &energy) in raw_levels.iter().enumerate() {
        if i > 0 && energy < raw_levels[i - 1] {
            return Err(Error::Domain(format!(
                "raw levels not sorted at index {i}: {} then {energy}",
                raw_levels[i - 1]
            )));
        }
        if energy <= floor {
            return Err(Error::NonMonotoneCounter { energy });
        }
        let mut x = counter.mean(energy);
        if let Some(&prev) = out.last() {
            if x <= prev {
                x = prev + TIE_SPLIT;
            }
        }
        out.push(x);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::rectangle_sides;

    #[test]
    fn empty_in_empty_out() {
        let c = WeylCounter::rectangle(2.5, 2.5);
        assert!(unfold(&[], &c).unwrap().is_empty());
    }

    #[test]
    fn ties_are_split_in_order() {
        let (a, b) = rectangle_sides(1.0);
        let c = WeylCounter::rectangle(a, b);
        let out = unfold(&[10.0, 20.0, 20.0, 20.0, 30.0], &c).unwrap();
        assert_eq!(out.len(), 5);
        assert_eq!(out[2], out[1] + TIE_SPLIT);
        assert_eq!(out[3], out[2] + TIE_SPLIT);
        assert!(out.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn rejects_non_monotone_region() {
        let c = WeylCounter::from_geometry(2.0 * PI, 40.0, 0.0);
        let floor = c.monotone_from();
        assert!(matches!(
            unfold(&[0.5 * floor], &c),
            Err(Error::NonMonotoneCounter { .. })
        ));
    }

    #[test]
    fn invert_round_trips() {
        let (a, b) = rectangle_sides(1.27);
        let c = WeylCounter::rectangle(a, b);
        for eps in [1.0, 10.0, 1e3, 2.1e4, 1e5] {
            let e = c.invert(eps);
            assert!((c.mean(e) - eps).abs() < 1e-9 * eps.max(1.0));
        }
        let q = WeylCounter::quarter_circle(2.0 * SQRT_2);
        assert!((q.area_coeff - 1.0).abs() < 1e-14);
    }
}
