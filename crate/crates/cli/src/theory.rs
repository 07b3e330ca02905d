//! Orbit sums evaluated on the configured grids.

use std::str::FromStr;

use glvar_core::po::{Mode, PoTheory};
use glvar_core::{Estimator, StatSeries};

use crate::config::RunConfig;
use crate::error::CliResult;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SumName {
    DeltaN,
    IntervalVariance,
    StaircaseCorrelation,
    SmallOmega,
    Delta3Saturation,
    GlobalVariance,
}

impl SumName {
    pub const ALL: [SumName; 6] = [
        SumName::DeltaN,
        SumName::IntervalVariance,
        SumName::StaircaseCorrelation,
        SumName::SmallOmega,
        SumName::Delta3Saturation,
        SumName::GlobalVariance,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            SumName::DeltaN => "delta-n",
            SumName::IntervalVariance => "interval-variance",
            SumName::StaircaseCorrelation => "staircase-correlation",
            SumName::SmallOmega => "small-omega",
            SumName::Delta3Saturation => "delta3-saturation",
            SumName::GlobalVariance => "global-variance",
        }
    }
}

impl FromStr for SumName {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL.into_iter().find(|n| n.as_str() == s).ok_or_else(|| {
            let names: Vec<_> = Self::ALL.iter().map(SumName::as_str).collect();
            format!("unknown sum `{s}` (expected one of {})", names.join(", "))
        })
    }
}

/// Ensemble-averaged sum: energy sums on the epsilon grid, window sums on
/// the omega grid at `window_epsilon`.
pub fn evaluate(name: SumName, cfg: &RunConfig) -> CliResult<StatSeries> {
    let th = PoTheory::new(cfg.ensemble.alpha0, &cfg.po_config())?;
    let eps = cfg.grids.epsilon.points();
    let omegas = cfg.grids.omega.points();
    let w = cfg.grids.window_epsilon;
    let (estimator, grid, values) = match name {
        SumName::DeltaN => (Estimator::PoDeltaN, eps.clone(), th.delta_n_curve(&eps)),
        SumName::Delta3Saturation => (Estimator::PoDelta3Saturation, eps.clone(), th.delta3_saturation_curve(&eps)),
        SumName::GlobalVariance => {
            let est = match cfg.po.mode {
                Mode::Diagonal => Estimator::PoGlobalDiagonal,
                Mode::PermutedPairs => Estimator::PoGlobalPermutedPairs,
                Mode::Full => Estimator::PoGlobalFull,
            };
            (est, eps.clone(), th.global_variance_curve(&eps))
        }
        SumName::IntervalVariance => (Estimator::PoSigmaInterval, omegas.clone(), th.sigma_interval_curve(w, &omegas)),
        SumName::StaircaseCorrelation => {
            (Estimator::PoStaircaseCorrelation, omegas.clone(), th.k_staircase_curve(w, &omegas))
        }
        SumName::SmallOmega => {
            let v = omegas.iter().map(|&o| th.small_omega(w, o)).collect();
            (Estimator::PoSmallOmega, omegas.clone(), v)
        }
    };
    Ok(StatSeries::new(estimator, grid, values, None, th.alphas().len())?.with_config_hash(&cfg.hash()))
}
