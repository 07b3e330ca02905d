//! Continuum completion of lattice sums beyond the truncation square.
//!
//! Families with `max(M1, M2) > mmax` are replaced by a polar integral over
//! the quadrant outside `[0, mmax + 1/2]^2`, minus the quarter-weight of the
//! axis families (which carry `delta^2 = 1/4` rather than the 1/2 the
//! continuum assigns them).

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use crate::po::special::sine_integral;

const GL5_NODES: [f64; 5] = [
    -0.906_179_845_938_664,
    -0.538_469_310_105_683,
    0.0,
    0.538_469_310_105_683,
    0.906_179_845_938_664,
];
const GL5_WEIGHTS: [f64; 5] = [
    0.236_926_885_056_189,
    0.478_628_670_499_366,
    0.568_888_888_888_889,
    0.478_628_670_499_366,
    0.236_926_885_056_189,
];
const MAX_PANELS: usize = 4096;

#[derive(Clone, Debug)]
pub struct TailModel {
    a: f64,
    b: f64,
    edge: f64,
    norm2: f64,
    weight: f64,
}

/// `int_{r0}^inf cos(k r) / r^2 dr`.
fn cos_radial(r0: f64, k: f64) -> f64 {
    let x = k * r0;
    if x == 0.0 {
        return 1.0 / r0;
    }
    x.cos() / r0 - k * (FRAC_PI_2 - sine_integral(x))
}

impl TailModel {
    pub fn new(a: f64, b: f64, mmax: u32) -> Self {
        let mut model = Self {
            a,
            b,
            edge: mmax as f64 + 0.5,
            norm2: (a * b).powi(2) * PI.powi(-3),
            weight: 0.0,
        };
        model.weight = model.cos_weight(0.0);
        model
    }

    /// Tail of `sum c_M^2`.
    pub fn weight(&self) -> f64 {
        self.weight
    }

    /// Tail of `sum c_M^2 cos(x * sqrt(2 Q_M))`, i.e. of `sum c^2 cos(omega T)`
    /// with `x = omega / sqrt(E)`.
    pub fn cos_weight(&self, x: f64) -> f64 {
        let x = x.abs();
        let (a2, b2) = (self.a * self.a, self.b * self.b);
        let rho_max = (2.0 * a2.max(b2)).sqrt() * self.edge * 2f64.sqrt();
        let phase = x * rho_max;
        let panels = (4 + (phase * 0.5).ceil() as usize).min(MAX_PANELS);
        let width = FRAC_PI_4 / panels as f64;

        let mut total = 0.0;
        for half in 0..2 {
            for p in 0..panels {
                let lo = half as f64 * FRAC_PI_4 + p as f64 * width;
                let mid = lo + 0.5 * width;
                for (t, w) in GL5_NODES.iter().zip(GL5_WEIGHTS) {
                    let theta = mid + 0.5 * width * t;
                    let (s, c) = theta.sin_cos();
                    let two_g = 2.0 * (a2 * c * c + b2 * s * s);
                    let r0 = self.edge / c.max(s);
                    let radial = cos_radial(r0, x * two_g.sqrt());
                    total += 0.5 * width * w * radial / (two_g * two_g.sqrt());
                }
            }
        }

        // sum_{k > m} k^-3 ~ 1 / (2 (m + 1/2)^2), oscillation taken at the edge
        let axis = |side2: f64| {
            let two = 2.0 * side2;
            0.25 / (two * two.sqrt()) / (2.0 * self.edge * self.edge)
                * (x * two.sqrt() * self.edge).cos()
        };
        self.norm2 * (total - axis(a2) - axis(b2))
    }
}
