//! Unit conventions.
//!
//! Mass and the reduced Planck constant are fixed to one, and every energy is
//! measured in units of the mean level spacing. For a two-dimensional billiard
//! the leading Weyl term is `area * E / (2 pi)`, so unit mean density forces
//! the billiard area to be `2 pi`.

use std::f64::consts::PI;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnitSystem {
    pub hbar: f64,
    pub mass: f64,
    pub mean_spacing: f64,
}

impl UnitSystem {
    pub const NATURAL: UnitSystem = UnitSystem {
        hbar: 1.0,
        mass: 1.0,
        mean_spacing: 1.0,
    };

    /// Billiard area giving unit mean level density.
    pub fn billiard_area(&self) -> f64 {
        2.0 * PI * self.hbar * self.hbar / (self.mass * self.mean_spacing)
    }
}

impl Default for UnitSystem {
    fn default() -> Self {
        Self::NATURAL
    }
}

/// Side lengths `(a, b)` of the rectangle with aspect ratio `alpha = a^2 / b^2`
/// and area `2 pi`.
pub fn rectangle_sides(alpha: f64) -> (f64, f64) {
    let scale = (2.0 * PI).sqrt();
    let q = alpha.powf(0.25);
    (scale * q, scale / q)
}
