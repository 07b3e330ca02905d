//! Direct numerical estimators over ensembles of spectra.

pub mod accumulator;
pub mod delta3;
pub mod estimators;
pub mod staircase;

pub use accumulator::EnsembleAccumulator;
pub use delta3::{
    delta3, delta3_ensemble, delta3_saturation_num, geometric_grid, plateau_of, Plateau, PLATEAU_STEP,
};
pub use estimators::{
    correlation_from, global_variance_from, global_variance_num, grid_accumulator,
    interval_variance_from, interval_variance_num, mean_staircase_diagnostic, mean_staircase_from,
    staircase_correlation_num, window_accumulator, window_endpoint_variances, Variant,
};
pub use staircase::staircase;
