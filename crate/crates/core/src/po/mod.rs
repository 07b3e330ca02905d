//! Periodic-orbit sums for the rectangular billiard.
//!
//! Orbit families are labelled by non-negative winding numbers
//! `M = (M1, M2) != (0, 0)`. With `Q = M1^2 a^2 + M2^2 b^2` (and `m = 1`):
//!
//! ```text
//! T = sqrt(2 Q / E),   S = 2 E T,   A^2 = a^2 b^2 / (pi^3 E T)
//! ```
//!
//! so each family enters the sums through `w = delta * A / T`, which equals
//! `c_M * E^(1/4)` with `c_M = delta * a b pi^(-3/2) (2 Q)^(-3/4)`.
//! Families on an axis (`M1 = 0` or `M2 = 0`) retrace themselves and carry
//! `delta = 1/2`; all others carry `delta = 1`.

pub mod orbits;
pub mod special;
pub mod stationary;
pub mod sums;
pub mod tail;

pub use orbits::{enumerate_orbits, OrbitSet, OrbitTerm};
pub use stationary::{stationary_phase_scan, PhaseDerivatives};
pub use sums::{
    delta3_saturation_po, delta_n_po, global_variance_po, k_staircase_po, sigma_interval_po,
    small_omega_po, adaptive_mmax, truncation_estimate, Averaging, EnergyScale, InterferenceCurves, Mode,
    PoSumConfig, PoTheory,
};
