//! Gaussian parametric family of aspect ratios.
//!
//! Each sample is drawn from its own ChaCha stream selected by the sample
//! index, so sample `i` depends only on `(alpha0, sigma, seed, i)` and the
//! list can be generated in any order or in parallel.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Widest Gaussian accepted; the parametric family is meant to be narrow.
pub const MAX_SIGMA: f64 = 0.2;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AspectRatioDistribution {
    pub alpha0: f64,
    pub sigma: f64,
    pub count: usize,
    pub seed: u64,
}

impl AspectRatioDistribution {
    pub fn new(alpha0: f64, sigma: f64, count: usize, seed: u64) -> Result<Self> {
        let dist = Self {
            alpha0,
            sigma,
            count,
            seed,
        };
        dist.validate()?;
        Ok(dist)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma > 0.0) {
            return Err(Error::InvalidDistribution(format!(
                "sigma must be positive, got {}",
                self.sigma
            )));
        }
        if self.sigma > MAX_SIGMA {
            return Err(Error::InvalidDistribution(format!(
                "sigma must not exceed {MAX_SIGMA}, got {}",
                self.sigma
            )));
        }
        if !(self.alpha0 > 0.0) || !self.alpha0.is_finite() {
            return Err(Error::InvalidDistribution(format!(
                "alpha0 must be positive, got {}",
                self.alpha0
            )));
        }
        if self.count == 0 {
            return Err(Error::InvalidDistribution("count must be at least 1".into()));
        }
        Ok(())
    }

    /// The `index`-th sample. Draws that are not positive are redrawn from
    /// the same stream.
    pub fn sample(&self, index: usize) -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index as u64);
        let normal = Normal::new(self.alpha0, self.sigma).expect("validated width");
        loop {
            let alpha = normal.sample(&mut rng);
            if alpha > 0.0 {
                return alpha;
            }
        }
    }
}

pub fn sample_aspect_ratios(dist: &AspectRatioDistribution) -> Result<Vec<f64>> {
    dist.validate()?;
    Ok((0..dist.count).map(|i| dist.sample(i)).collect())
}
