use std::f64::consts::PI;

use crate::po::tail::TailModel;
use crate::units::rectangle_sides;

/// One periodic-orbit family evaluated at a given energy.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OrbitTerm {
    pub winding: (u32, u32),
    pub delta: f64,
    pub amplitude: f64,
    pub period: f64,
    pub action: f64,
}

#[inline]
fn degeneracy(m1: u32, m2: u32) -> f64 {
    if m1 == 0 || m2 == 0 {
        0.5
    } else {
        1.0
    }
}

/// Families with `0 <= M1, M2 <= mmax`, `M != 0`, in row-major order of
/// `(M1, M2)`, at energy `epsilon` (taken as given, no unfolding).
pub fn enumerate_orbits(alpha: f64, epsilon: f64, mmax: u32) -> Vec<OrbitTerm> {
    let (a, b) = rectangle_sides(alpha);
    let mut out = Vec::with_capacity(((mmax + 1) * (mmax + 1)) as usize);
    for m1 in 0..=mmax {
        for m2 in 0..=mmax {
            if m1 == 0 && m2 == 0 {
                continue;
            }
            let q = (m1 as f64 * a).powi(2) + (m2 as f64 * b).powi(2);
            let period = (2.0 * q / epsilon).sqrt();
            let action = 2.0 * epsilon * period;
            let amplitude = (a * a * b * b / (PI.powi(3) * epsilon * period)).sqrt();
            out.push(OrbitTerm {
                winding: (m1, m2),
                delta: degeneracy(m1, m2),
                amplitude,
                period,
                action,
            });
        }
    }
    out
}

/// Energy-independent data of the truncated family set at one aspect ratio.
///
/// For family `i`, `w_i(E) = coeff[i] * E^(1/4)`, `T_i(E) = root_2q[i] / sqrt(E)`
/// and `S_i(E) = 2 root_2q[i] sqrt(E)`.
#[derive(Clone, Debug)]
pub struct OrbitSet {
    pub alpha: f64,
    pub a: f64,
    pub b: f64,
    pub mmax: u32,
    pub windings: Vec<(u32, u32)>,
    pub coeff: Vec<f64>,
    pub root_2q: Vec<f64>,
    /// `(i, j)` with `windings[j]` the transpose of `windings[i]`, `M1 < M2`.
    pub permuted_pairs: Vec<(usize, usize)>,
    /// `sum coeff^2` over the explicit families.
    pub weight_sum: f64,
    pub tail: Option<TailModel>,
}

impl OrbitSet {
    pub fn new(alpha: f64, mmax: u32, with_tail: bool) -> Self {
        let (a, b) = rectangle_sides(alpha);
        let norm = a * b * PI.powf(-1.5);
        let side = mmax as usize + 1;
        let mut windings = Vec::with_capacity(side * side);
        let mut coeff = Vec::with_capacity(side * side);
        let mut root_2q = Vec::with_capacity(side * side);
        for m1 in 0..=mmax {
            for m2 in 0..=mmax {
                if m1 == 0 && m2 == 0 {
                    continue;
                }
                let two_q = 2.0 * ((m1 as f64 * a).powi(2) + (m2 as f64 * b).powi(2));
                windings.push((m1, m2));
                coeff.push(degeneracy(m1, m2) * norm * two_q.powf(-0.75));
                root_2q.push(two_q.sqrt());
            }
        }
        // row-major index of (m1, m2), shifted by the skipped origin
        let index = |m1: u32, m2: u32| (m1 as usize) * side + m2 as usize - 1;
        let mut permuted_pairs = Vec::new();
        for m1 in 0..=mmax {
            for m2 in (m1 + 1)..=mmax {
                permuted_pairs.push((index(m1, m2), index(m2, m1)));
            }
        }
        let weight_sum = coeff.iter().map(|c| c * c).sum();
        Self {
            alpha,
            a,
            b,
            mmax,
            windings,
            coeff,
            root_2q,
            permuted_pairs,
            weight_sum,
            tail: with_tail.then(|| TailModel::new(a, b, mmax)),
        }
    }

    pub fn len(&self) -> usize {
        self.coeff.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeff.is_empty()
    }
}

/// `sum delta^2 c_M^2` over `0 <= M1, M2 <= mmax` without storing the set.
pub fn lattice_weight_sum(alpha: f64, mmax: u32) -> f64 {
    let (a, b) = rectangle_sides(alpha);
    let norm2 = (a * b).powi(2) * PI.powi(-3);
    let (a2, b2) = (a * a, b * b);
    let mut total = 0.0;
    for m1 in 0..=mmax {
        let x = a2 * (m1 as f64).powi(2);
        let mut row = 0.0;
        for m2 in 0..=mmax {
            if m1 == 0 && m2 == 0 {
                continue;
            }
            let two_q = 2.0 * (x + b2 * (m2 as f64).powi(2));
            let d = degeneracy(m1, m2);
            row += d * d / (two_q * two_q.sqrt());
        }
        total += row;
    }
    norm2 * total
}
