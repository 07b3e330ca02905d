//! Second-order spectral statistics for integrable billiards.
//!
//! The crate is organised around four layers:
//!
//! - [`units`], [`ensemble`], [`spectrum`], [`series`]: shared domain types.
//!   Energies are always dimensionless multiples of the mean level spacing.
//! - [`spectra`]: exact eigenvalues of the rectangular and quarter-circular
//!   Dirichlet billiards, unfolded to unit mean density with a Weyl counter.
//! - [`po`]: periodic-orbit sums for the rectangular billiard (fluctuating
//!   staircase, interval variance, staircase correlation, saturation
//!   rigidity and the global variance with and without orbit interference).
//! - [`stats`]: direct ensemble estimators over exact spectra.

pub mod ensemble;
pub mod error;
pub mod po;
pub mod series;
pub mod spectra;
pub mod spectrum;
pub mod stats;
pub mod units;

pub use ensemble::{sample_aspect_ratios, AspectRatioDistribution};
pub use error::{Error, Result};
pub use series::{Estimator, SeriesMeta, StatSeries};
pub use spectrum::{Spectrum, SystemKind};
pub use units::UnitSystem;
