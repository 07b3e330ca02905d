use std::f64::consts::FRAC_PI_4;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ensemble::{sample_aspect_ratios, AspectRatioDistribution};
use crate::error::{Error, Result};
use crate::po::orbits::{lattice_weight_sum, OrbitSet};
use crate::po::tail::TailModel;
use crate::spectra::WeylCounter;
use crate::units::rectangle_sides;

const MAX_MMAX: u32 = 2048;
const CHUNK: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Diagonal,
    PermutedPairs,
    Full,
}

/// How the energy argument of the sums is read.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnergyScale {
    /// Argument is an unfolded energy; each aspect ratio evaluates its orbits
    /// at the raw energy whose smooth count equals it.
    Unfolded,
    /// Argument is the raw energy.
    Raw,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Averaging {
    Single,
    Ensemble(AspectRatioDistribution),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PoSumConfig {
    /// Truncation `max(M1, M2) <= mmax`; `None` picks the smallest power of two
    /// whose saturation rigidity changes by less than `tolerance` on doubling.
    pub mmax: Option<u32>,
    /// Floor applied to the adaptive choice, for the oscillatory sums.
    pub min_mmax: u32,
    pub tolerance: f64,
    pub mode: Mode,
    /// `hbar` exponent of the amplitudes, `(N - 1) / 2` in `N` dimensions.
    pub mu: f64,
    /// Phase `phi` in `sin(S - phi)`.
    pub maslov_phase: f64,
    /// Keep the `cos(2S - 2 phi)` self terms in the staircase correlation and
    /// the global variance.
    pub include_self_cosine: bool,
    /// Replace families beyond the truncation by their continuum integral in
    /// the non-oscillatory parts of the sums.
    pub tail_completion: bool,
    pub energy_scale: EnergyScale,
    pub averaging: Averaging,
}

impl Default for PoSumConfig {
    fn default() -> Self {
        Self {
            mmax: None,
            min_mmax: 1,
            tolerance: 1e-3,
            mode: Mode::Full,
            mu: 0.5,
            maslov_phase: FRAC_PI_4,
            include_self_cosine: false,
            tail_completion: true,
            energy_scale: EnergyScale::Unfolded,
            averaging: Averaging::Single,
        }
    }
}

impl PoSumConfig {
    pub fn validate(&self) -> Result<()> {
        if let Some(m) = self.mmax {
            if m == 0 || m > MAX_MMAX {
                return Err(Error::Domain(format!("mmax must be in 1..={MAX_MMAX}, got {m}")));
            }
        }
        if !(self.tolerance > 0.0 && self.tolerance < 1.0) {
            return Err(Error::Domain(format!("tolerance {} outside (0, 1)", self.tolerance)));
        }
        if !(self.mu > 0.0) || !self.maslov_phase.is_finite() {
            return Err(Error::Domain("mu must be positive and the phase finite".into()));
        }
        if let Averaging::Ensemble(d) = &self.averaging {
            d.validate()?;
        }
        Ok(())
    }
}

fn completed_weight(alpha: f64, m: u32, completion: bool) -> (f64, f64) {
    let (a, b) = rectangle_sides(alpha);
    let partial = lattice_weight_sum(alpha, m);
    let tail = TailModel::new(a, b, m).weight();
    if completion {
        (partial + tail, tail)
    } else {
        (partial, tail)
    }
}

/// Relative truncation error estimate of the saturation rigidity at `mmax`.
///
/// With completion this is the change on doubling `mmax`; without, it is the
/// continuum estimate of the omitted tail over the partial sum.
pub fn truncation_estimate(alpha: f64, mmax: u32, completion: bool) -> f64 {
    if completion {
        let (lo, _) = completed_weight(alpha, mmax, true);
        let (hi, _) = completed_weight(alpha, 2 * mmax, true);
        ((hi - lo) / hi).abs()
    } else {
        let (partial, tail) = completed_weight(alpha, mmax, false);
        tail / partial
    }
}

/// Smallest power of two meeting `tolerance` (see [`truncation_estimate`]).
pub fn adaptive_mmax(alpha: f64, tolerance: f64, completion: bool) -> Result<u32> {
    let mut m = 1;
    loop {
        let estimate = truncation_estimate(alpha, m, completion);
        if estimate < tolerance {
            return Ok(m);
        }
        if m >= MAX_MMAX {
            return Err(Error::Truncation { mmax: m, estimate, tolerance });
        }
        m *= 2;
    }
}

/// Theory curves on a common energy grid.
#[derive(Clone, Debug, PartialEq)]
pub struct InterferenceCurves {
    pub grid: Vec<f64>,
    pub diagonal: Vec<f64>,
    pub permuted_pairs: Vec<f64>,
    /// Mean of `(delta N)^2`; compare with the variance about `epsilon`.
    pub full: Vec<f64>,
    /// `full - <delta N>^2`; compare with the variance about the mean.
    pub connected: Vec<f64>,
    /// Mean of `delta N`.
    pub delta_n: Vec<f64>,
}

/// Orbit sums for one aspect ratio or a parametric ensemble of them.
#[derive(Clone, Debug)]
pub struct PoTheory {
    cfg: PoSumConfig,
    mmax: u32,
    estimate: f64,
    sets: Vec<OrbitSet>,
    counters: Vec<WeylCounter>,
}

struct Point {
    e: f64,
    root_e: f64,
    quarter_e: f64,
}

impl PoTheory {
    /// `alpha` is used only when `cfg.averaging` is [`Averaging::Single`].
    pub fn new(alpha: f64, cfg: &PoSumConfig) -> Result<Self> {
        cfg.validate()?;
        let alphas = match &cfg.averaging {
            Averaging::Single => {
                if !(alpha > 0.0 && alpha.is_finite()) {
                    return Err(Error::Domain(format!("aspect ratio must be positive, got {alpha}")));
                }
                vec![alpha]
            }
            Averaging::Ensemble(d) => sample_aspect_ratios(d)?,
        };
        let centre = match &cfg.averaging {
            Averaging::Single => alpha,
            Averaging::Ensemble(d) => d.alpha0,
        };
        let mmax = match cfg.mmax {
            Some(m) => m,
            None => adaptive_mmax(centre, cfg.tolerance, cfg.tail_completion)?.max(cfg.min_mmax),
        };
        let estimate = truncation_estimate(centre, mmax, cfg.tail_completion);
        if estimate >= cfg.tolerance {
            return Err(Error::Truncation { mmax, estimate, tolerance: cfg.tolerance });
        }
        let sets: Vec<OrbitSet> = alphas
            .par_iter()
            .map(|&al| OrbitSet::new(al, mmax, cfg.tail_completion))
            .collect();
        let counters = sets.iter().map(|s| WeylCounter::rectangle(s.a, s.b)).collect();
        Ok(Self { cfg: cfg.clone(), mmax, estimate, sets, counters })
    }

    pub fn config(&self) -> &PoSumConfig {
        &self.cfg
    }

    pub fn mmax(&self) -> u32 {
        self.mmax
    }

    pub fn truncation_estimate(&self) -> f64 {
        self.estimate
    }

    pub fn alphas(&self) -> Vec<f64> {
        self.sets.iter().map(|s| s.alpha).collect()
    }

    fn point(&self, k: usize, epsilon: f64) -> Point {
        let e = match self.cfg.energy_scale {
            EnergyScale::Unfolded => self.counters[k].invert(epsilon),
            EnergyScale::Raw => epsilon,
        };
        let root_e = e.sqrt();
        Point { e, root_e, quarter_e: root_e.sqrt() }
    }

    /// Parametric mean of `f(set, point, x)` for every `x` in `xs`, in a
    /// fixed reduction order.
    fn average<F>(&self, epsilon: f64, xs: &[f64], f: F) -> Vec<f64>
    where
        F: Fn(&OrbitSet, &Point, f64) -> f64 + Sync,
    {
        let partials: Vec<Vec<f64>> = (0..self.sets.len())
            .collect::<Vec<_>>()
            .par_chunks(CHUNK)
            .map(|chunk| {
                let mut acc = vec![0.0; xs.len()];
                for &k in chunk {
                    let p = self.point(k, epsilon);
                    for (slot, &x) in acc.iter_mut().zip(xs) {
                        *slot += f(&self.sets[k], &p, x);
                    }
                }
                acc
            })
            .collect();
        let mut total = vec![0.0; xs.len()];
        for part in partials {
            for (t, v) in total.iter_mut().zip(part) {
                *t += v;
            }
        }
        let n = self.sets.len() as f64;
        total.into_iter().map(|t| t / n).collect()
    }

    /// Parametric mean of `f(set, point)` at each energy in `grid`, for `K`
    /// quantities evaluated together.
    fn average_over_energy<const K: usize, F>(&self, grid: &[f64], f: F) -> [Vec<f64>; K]
    where
        F: Fn(&OrbitSet, &Point) -> [f64; K] + Sync,
    {
        let partials: Vec<Vec<[f64; K]>> = (0..self.sets.len())
            .collect::<Vec<_>>()
            .par_chunks(CHUNK)
            .map(|chunk| {
                let mut acc = vec![[0.0; K]; grid.len()];
                for &k in chunk {
                    for (slot, &eps) in acc.iter_mut().zip(grid) {
                        let v = f(&self.sets[k], &self.point(k, eps));
                        for (s, x) in slot.iter_mut().zip(v) {
                            *s += x;
                        }
                    }
                }
                acc
            })
            .collect();
        let mut total = vec![[0.0; K]; grid.len()];
        for part in partials {
            for (t, v) in total.iter_mut().zip(part) {
                for (s, x) in t.iter_mut().zip(v) {
                    *s += x;
                }
            }
        }
        let n = self.sets.len() as f64;
        std::array::from_fn(|q| total.iter().map(|t| t[q] / n).collect())
    }

    fn weight(set: &OrbitSet) -> f64 {
        set.weight_sum + set.tail.as_ref().map_or(0.0, |t| t.weight())
    }

    fn cos_weight(set: &OrbitSet, p: &Point, omega: f64) -> f64 {
        let x = omega / p.root_e;
        let explicit: f64 = set
            .coeff
            .iter()
            .zip(&set.root_2q)
            .map(|(c, r)| c * c * (x * r).cos())
            .sum();
        explicit + set.tail.as_ref().map_or(0.0, |t| t.cos_weight(x))
    }

    fn one_minus_cos_weight(set: &OrbitSet, p: &Point, omega: f64) -> f64 {
        let x = omega / p.root_e;
        let explicit: f64 = set
            .coeff
            .iter()
            .zip(&set.root_2q)
            .map(|(c, r)| c * c * (1.0 - (x * r).cos()))
            .sum();
        explicit + set.tail.as_ref().map_or(0.0, |t| t.weight() - t.cos_weight(x))
    }

    /// `-2 sum w^2 cos(2S - 2 phi)`.
    fn self_cosine_at(&self, set: &OrbitSet, p: &Point) -> f64 {
        let phi2 = 2.0 * self.cfg.maslov_phase;
        let s: f64 = set
            .coeff
            .iter()
            .zip(&set.root_2q)
            .map(|(c, r)| c * c * (4.0 * r * p.root_e - phi2).cos())
            .sum();
        -2.0 * p.root_e * s
    }

    fn oscillating_sum(&self, set: &OrbitSet, p: &Point) -> f64 {
        let phi = self.cfg.maslov_phase;
        set.coeff
            .iter()
            .zip(&set.root_2q)
            .map(|(c, r)| c * (2.0 * r * p.root_e - phi).sin())
            .sum()
    }

    fn permuted_cross(&self, set: &OrbitSet, p: &Point) -> f64 {
        let phi2 = 2.0 * self.cfg.maslov_phase;
        let s: f64 = set
            .permuted_pairs
            .iter()
            .map(|&(i, j)| {
                let (si, sj) = (2.0 * set.root_2q[i] * p.root_e, 2.0 * set.root_2q[j] * p.root_e);
                set.coeff[i] * set.coeff[j] * ((si - sj).cos() - (si + sj - phi2).cos())
            })
            .sum();
        4.0 * p.root_e * s
    }

    pub fn delta3_saturation(&self, epsilon: f64) -> f64 {
        self.delta3_saturation_curve(&[epsilon])[0]
    }

    pub fn delta3_saturation_curve(&self, grid: &[f64]) -> Vec<f64> {
        let [v] = self.average_over_energy(grid, |set, p| [2.0 * p.root_e * Self::weight(set)]);
        v
    }

    pub fn sigma_interval(&self, epsilon: f64, omega: f64) -> f64 {
        self.sigma_interval_curve(epsilon, &[omega])[0]
    }

    pub fn sigma_interval_curve(&self, epsilon: f64, omegas: &[f64]) -> Vec<f64> {
        self.average(epsilon, omegas, |set, p, w| {
            4.0 * p.root_e * Self::one_minus_cos_weight(set, p, w)
        })
    }

    pub fn k_staircase(&self, epsilon: f64, omega: f64) -> f64 {
        self.k_staircase_curve(epsilon, &[omega])[0]
    }

    pub fn k_staircase_curve(&self, epsilon: f64, omegas: &[f64]) -> Vec<f64> {
        let self_cos = self.cfg.include_self_cosine;
        self.average(epsilon, omegas, |set, p, w| {
            let k = 2.0 * p.root_e * Self::cos_weight(set, p, w);
            if self_cos {
                k + self.self_cosine_at(set, p)
            } else {
                k
            }
        })
    }

    /// `Delta3_inf - |omega| / 2`.
    pub fn small_omega(&self, epsilon: f64, omega: f64) -> f64 {
        self.delta3_saturation(epsilon) - 0.5 * omega.abs()
    }

    pub fn delta_n(&self, epsilon: f64) -> f64 {
        self.delta_n_curve(&[epsilon])[0]
    }

    pub fn delta_n_curve(&self, grid: &[f64]) -> Vec<f64> {
        let [v] = self.average_over_energy(grid, |set, p| [2.0 * p.quarter_e * self.oscillating_sum(set, p)]);
        v
    }

    pub fn global_variance(&self, epsilon: f64) -> f64 {
        self.global_variance_curve(&[epsilon])[0]
    }

    pub fn global_variance_curve(&self, grid: &[f64]) -> Vec<f64> {
        self.global_variance_curve_mode(grid, self.cfg.mode)
    }

    pub fn global_variance_curve_mode(&self, grid: &[f64], mode: Mode) -> Vec<f64> {
        let c = self.interference_curves(grid);
        match mode {
            Mode::Diagonal => c.diagonal,
            Mode::PermutedPairs => c.permuted_pairs,
            Mode::Full => c.full,
        }
    }

    /// Every global-variance mode and the mean fluctuating staircase, from a
    /// single pass over the ensemble.
    pub fn interference_curves(&self, grid: &[f64]) -> InterferenceCurves {
        let self_cos = self.cfg.include_self_cosine;
        let [diagonal, permuted_pairs, full, delta_n] =
            self.average_over_energy(grid, |set, p| {
                let mut diagonal = 2.0 * p.root_e * Self::weight(set);
                if self_cos {
                    diagonal += self.self_cosine_at(set, p);
                }
                let permuted = diagonal + self.permuted_cross(set, p);
                let s = self.oscillating_sum(set, p);
                let tail = set.tail.as_ref().map_or(0.0, |t| t.weight());
                let full = 4.0 * p.root_e * s * s + 2.0 * p.root_e * tail;
                [diagonal, permuted, full, 2.0 * p.quarter_e * s]
            });
        let connected = full.iter().zip(&delta_n).map(|(f, d)| f - d * d).collect();
        InterferenceCurves { grid: grid.to_vec(), diagonal, permuted_pairs, full, connected, delta_n }
    }

    /// Raw energy at which aspect ratio `k` is evaluated for `epsilon`.
    pub fn raw_energy(&self, k: usize, epsilon: f64) -> f64 {
        self.point(k, epsilon).e
    }
}

pub fn delta_n_po(alpha: f64, epsilon: f64, cfg: &PoSumConfig) -> Result<f64> {
    Ok(PoTheory::new(alpha, cfg)?.delta_n(epsilon))
}

pub fn sigma_interval_po(alpha: f64, epsilon: f64, omega: f64, cfg: &PoSumConfig) -> Result<f64> {
    Ok(PoTheory::new(alpha, cfg)?.sigma_interval(epsilon, omega))
}

pub fn k_staircase_po(alpha: f64, epsilon: f64, omega: f64, cfg: &PoSumConfig) -> Result<f64> {
    Ok(PoTheory::new(alpha, cfg)?.k_staircase(epsilon, omega))
}

pub fn delta3_saturation_po(alpha: f64, epsilon: f64, cfg: &PoSumConfig) -> Result<f64> {
    Ok(PoTheory::new(alpha, cfg)?.delta3_saturation(epsilon))
}

pub fn small_omega_po(alpha: f64, epsilon: f64, omega: f64, cfg: &PoSumConfig) -> Result<f64> {
    Ok(PoTheory::new(alpha, cfg)?.small_omega(epsilon, omega))
}

/// Requires an ensemble: the interference terms only make sense averaged.
pub fn global_variance_po(epsilon: f64, cfg: &PoSumConfig) -> Result<f64> {
    if cfg.averaging == Averaging::Single {
        return Err(Error::Domain("global variance needs an aspect-ratio ensemble".into()));
    }
    Ok(PoTheory::new(0.0, cfg)?.global_variance(epsilon))
}
