use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::spectra::weyl::{unfold, WeylCounter};
use crate::spectrum::{Spectrum, SystemKind};
use crate::units::rectangle_sides;

/// Dirichlet rectangle of area `2 pi` and aspect ratio `alpha = a^2 / b^2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RectangularBilliard {
    pub alpha: f64,
    pub a: f64,
    pub b: f64,
}

impl RectangularBilliard {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::Domain(format!("aspect ratio must be positive, got {alpha}")));
        }
        let (a, b) = rectangle_sides(alpha);
        Ok(Self { alpha, a, b })
    }

    /// `E(n1, n2) = (pi^2 / 2) (n1^2 / a^2 + n2^2 / b^2)`.
    #[inline]
    pub fn level(&self, n1: u64, n2: u64) -> f64 {
        let (x, y) = (n1 as f64 / self.a, n2 as f64 / self.b);
        0.5 * PI * PI * (x * x + y * y)
    }

    pub fn weyl(&self) -> WeylCounter {
        WeylCounter::rectangle(self.a, self.b)
    }

    /// Every raw level `<= e_max`, ascending, with multiplicity.
    ///
    /// Quantum numbers lie inside the quarter ellipse
    /// `n1^2/a^2 + n2^2/b^2 <= 2 e_max / pi^2`; each row `n1` is bounded
    /// analytically and then trimmed against the exact level formula.
    pub fn raw_levels(&self, e_max: f64, cap: usize) -> Result<Vec<f64>> {
        let estimate = self.weyl().mean(e_max).max(0.0) as usize + 16;
        if estimate > cap {
            return Err(Error::LevelCap { estimate, cap });
        }
        let radius2 = 2.0 * e_max / (PI * PI);
        let mut levels = Vec::with_capacity(estimate + estimate / 8);
        let mut n1 = 1u64;
        loop {
            let x = n1 as f64 / self.a;
            let rem = radius2 - x * x;
            if rem < 0.0 {
                break;
            }
            let mut n2_max = (self.b * rem.sqrt()) as u64 + 1;
            while n2_max > 0 && self.level(n1, n2_max) > e_max {
                n2_max -= 1;
            }
            if n2_max == 0 && self.level(n1, 1) > e_max {
                break;
            }
            levels.extend((1..=n2_max).map(|n2| self.level(n1, n2)));
            n1 += 1;
        }
        if levels.len() > cap {
            return Err(Error::LevelCap {
                estimate: levels.len(),
                cap,
            });
        }
        levels.sort_unstable_by(f64::total_cmp);
        Ok(levels)
    }
}

/// Unfolded spectrum complete up to `emax` (in mean-spacing units).
pub fn rb_levels(billiard: &RectangularBilliard, emax: f64, cap: usize) -> Result<Spectrum> {
    if !(emax > 0.0) {
        return Err(Error::Domain(format!("emax must be positive, got {emax}")));
    }
    let counter = billiard.weyl();
    let raw_bound = counter.invert(emax) * (1.0 + 1e-12) + 1e-9;
    let raw = billiard.raw_levels(raw_bound, cap)?;
    let mut levels = unfold(&raw, &counter)?;
    let keep = levels.partition_point(|&x| x <= emax);
    levels.truncate(keep);
    Spectrum::new(SystemKind::Rectangular, billiard.alpha, levels, emax)
}
