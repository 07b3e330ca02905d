//! Exact billiard spectra and unfolding.

pub mod bessel;
pub mod cache;
pub mod quarter_circle;
pub mod rectangular;
pub mod weyl;

pub use bessel::{bessel_j, bessel_zeros_below};
pub use quarter_circle::{qcb_levels, QuarterCircularBilliard};
pub use rectangular::{rb_levels, RectangularBilliard};
pub use weyl::{unfold, WeylCounter, TIE_SPLIT};

use rayon::prelude::*;

use crate::error::Result;
use crate::spectrum::Spectrum;

/// Default ceiling on the number of levels generated for one spectrum.
pub const DEFAULT_LEVEL_CAP: usize = 50_000_000;

/// Rectangular-billiard spectra for every `alpha`, generated in parallel and
/// returned in input order.
pub fn rb_ensemble(alphas: &[f64], emax: f64, cap: usize) -> Result<Vec<Spectrum>> {
    alphas
        .par_iter()
        .map(|&alpha| rb_levels(&RectangularBilliard::new(alpha)?, emax, cap))
        .collect()
}
