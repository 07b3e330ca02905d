use std::f64::consts::SQRT_2;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::spectra::bessel::bessel_zeros_below;
use crate::spectra::weyl::{unfold, WeylCounter};
use crate::spectrum::{Spectrum, SystemKind};

/// Dirichlet quarter disc. Eigenfunctions are `J_m(k r) sin(m theta)` with
/// even `m >= 2`, so levels are `(j_{m,k} / R)^2 / 2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuarterCircularBilliard {
    pub radius: f64,
}

impl Default for QuarterCircularBilliard {
    /// Radius `2 sqrt(2)`: area `pi R^2 / 4 = 2 pi`.
    fn default() -> Self {
        Self {
            radius: 2.0 * SQRT_2,
        }
    }
}

impl QuarterCircularBilliard {
    pub fn weyl(&self) -> WeylCounter {
        WeylCounter::quarter_circle(self.radius)
    }

    /// Raw levels `<= e_max` with their `(m, k)` labels.
    pub fn labelled_levels(&self, e_max: f64, cap: usize) -> Result<Vec<(f64, u32, usize)>> {
        let estimate = self.weyl().mean(e_max).max(0.0) as usize + 16;
        if estimate > cap {
            return Err(Error::LevelCap { estimate, cap });
        }
        let x_max = self.radius * (2.0 * e_max).sqrt();
        // j_{m,1} > m, so orders beyond x_max contribute nothing
        let orders: Vec<u32> = (1..).map(|i| 2 * i).take_while(|&m| (m as f64) < x_max).collect();
        let per_order: Vec<Vec<f64>> = orders
            .par_iter()
            .map(|&m| bessel_zeros_below(m, x_max))
            .collect::<Result<_>>()?;
        let scale = 0.5 / (self.radius * self.radius);
        let mut out: Vec<(f64, u32, usize)> = orders
            .iter()
            .zip(per_order)
            .flat_map(|(&m, zeros)| {
                zeros
                    .into_iter()
                    .enumerate()
                    .map(move |(k, j)| (scale * j * j, m, k + 1))
            })
            .filter(|&(e, _, _)| e <= e_max)
            .collect();
        out.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
        Ok(out)
    }
}

pub fn qcb_levels(billiard: &QuarterCircularBilliard, emax: f64, cap: usize) -> Result<Spectrum> {
    if !(emax > 0.0) {
        return Err(Error::Domain(format!("emax must be positive, got {emax}")));
    }
    let counter = billiard.weyl();
    let raw_bound = counter.invert(emax) * (1.0 + 1e-12) + 1e-9;
    let raw: Vec<f64> = billiard
        .labelled_levels(raw_bound, cap)?
        .into_iter()
        .map(|(e, _, _)| e)
        .collect();
    let mut levels = unfold(&raw, &counter)?;
    let keep = levels.partition_point(|&x| x <= emax);
    levels.truncate(keep);
    Spectrum::new(SystemKind::QuarterCircle, 1.0, levels, emax)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lowest_level_uses_j21() {
        let qcb = QuarterCircularBilliard::default();
        let levels = qcb.labelled_levels(20.0, usize::MAX).unwrap();
        let (e, m, k) = levels[0];
        assert_eq!((m, k), (2, 1));
        let j = (2.0 * e).sqrt() * qcb.radius;
        assert!((j - 5.135622302).abs() < 1e-8);
    }

    #[test]
    fn zeros_increase_along_both_indices() {
        let qcb = QuarterCircularBilliard::default();
        let levels = qcb.labelled_levels(600.0, usize::MAX).unwrap();
        let lookup = |m: u32, k: usize| levels.iter().find(|l| l.1 == m && l.2 == k).map(|l| l.0);
        for &(e, m, k) in &levels {
            if let Some(next_k) = lookup(m, k + 1) {
                assert!(e < next_k);
            }
            if let Some(next_m) = lookup(m + 2, k) {
                assert!(e < next_m);
            }
        }
    }
}
