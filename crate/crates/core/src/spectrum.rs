use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SystemKind {
    Rectangular,
    QuarterCircle,
}

impl SystemKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            SystemKind::Rectangular => "rectangular",
            SystemKind::QuarterCircle => "quarter-circle",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "rectangular" => Some(SystemKind::Rectangular),
            "quarter-circle" => Some(SystemKind::QuarterCircle),
            _ => None,
        }
    }
}

/// Unfolded spectrum of one billiard.
///
/// `levels` is strictly increasing and complete up to `emax`: every level of
/// the billiard whose unfolded value is `<= emax` is present.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    pub system: SystemKind,
    pub alpha: f64,
    pub levels: Vec<f64>,
    pub emax: f64,
}

impl Spectrum {
    pub fn new(system: SystemKind, alpha: f64, levels: Vec<f64>, emax: f64) -> Result<Self> {
        if let Some(w) = levels.windows(2).find(|w| !(w[0] < w[1])) {
            return Err(Error::Domain(format!(
                "levels must be strictly increasing ({} then {})",
                w[0], w[1]
            )));
        }
        if levels.iter().any(|x| !x.is_finite()) {
            return Err(Error::Domain("levels must be finite".into()));
        }
        Ok(Self {
            system,
            alpha,
            levels,
            emax,
        })
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// Right-continuous staircase without the range check.
    #[inline]
    pub fn count_le(&self, epsilon: f64) -> usize {
        self.levels.partition_point(|&x| x <= epsilon)
    }
}
