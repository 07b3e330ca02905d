//! Run configuration, persisted as TOML.

use std::f64::consts::FRAC_PI_4;
use std::path::{Path, PathBuf};

use glvar_core::po::{Averaging, EnergyScale, Mode, PoSumConfig};
use glvar_core::{AspectRatioDistribution, SystemKind};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

/// `start, start + step, ...` up to `stop` inclusive.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinearGrid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl LinearGrid {
    pub fn points(&self) -> Vec<f64> {
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..n).map(|k| self.start + k as f64 * self.step).collect()
    }

    fn validate(&self, name: &str) -> CliResult<()> {
        if !(self.step > 0.0 && self.stop >= self.start && self.start.is_finite() && self.stop.is_finite()) {
            return Err(CliError::Config(format!("grid `{name}` needs step > 0 and stop >= start")));
        }
        Ok(())
    }
}

/// `count` points spaced geometrically from `start` to `stop` inclusive.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometricGrid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl GeometricGrid {
    pub fn points(&self) -> Vec<f64> {
        glvar_core::stats::geometric_grid(self.start, self.stop, self.count)
    }

    fn validate(&self, name: &str) -> CliResult<()> {
        if !(self.count >= 2 && self.start > 0.0 && self.stop > self.start) {
            return Err(CliError::Config(format!("grid `{name}` needs count >= 2 and 0 < start < stop")));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grids {
    /// Energies for the global variance and mean staircase.
    pub epsilon: LinearGrid,
    /// Window widths for the staircase correlation and interval variance.
    pub omega: LinearGrid,
    /// Centre energy of the correlation windows.
    pub window_epsilon: f64,
    /// Energies at which the saturation rigidity is read off.
    pub rigidity_epsilon: GeometricGrid,
    /// Window lengths scanned for the rigidity plateau.
    pub lengths: GeometricGrid,
    /// Number of individual staircases drawn in the staircase figure.
    pub staircases: usize,
}

/// Orbit-sum settings; the ensemble is always the run's own.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PoSettings {
    pub mmax: Option<u32>,
    pub min_mmax: u32,
    pub tolerance: f64,
    pub mode: Mode,
    pub maslov_phase: f64,
    pub include_self_cosine: bool,
    pub tail_completion: bool,
}

impl Default for PoSettings {
    fn default() -> Self {
        Self {
            mmax: None,
            min_mmax: 8,
            tolerance: 1e-3,
            mode: Mode::Full,
            maslov_phase: FRAC_PI_4,
            include_self_cosine: false,
            tail_completion: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub system: SystemKind,
    pub ensemble: AspectRatioDistribution,
    /// Unfolded energy up to which every spectrum is complete.
    pub emax: f64,
    pub grids: Grids,
    pub po: PoSettings,
    pub output: PathBuf,
    /// Seed for the randomized checks of the acceptance suite.
    pub seed: u64,
}

impl RunConfig {
    /// Desk-scale defaults: 2000 aspect ratios, levels to 2.1e4.
    pub fn desk() -> Self {
        Self {
            system: SystemKind::Rectangular,
            ensemble: AspectRatioDistribution { alpha0: 1.0, sigma: 0.05, count: 2000, seed: 1 },
            emax: 2.1e4,
            grids: Grids {
                epsilon: LinearGrid { start: 1e3, stop: 1e4, step: 1.0 },
                omega: LinearGrid { start: 0.0, stop: 50.0, step: 0.25 },
                window_epsilon: 1e4,
                rigidity_epsilon: GeometricGrid { start: 1e3, stop: 2e4, count: 9 },
                lengths: GeometricGrid { start: 1.0, stop: 1000.0, count: 40 },
                staircases: 6,
            },
            po: PoSettings::default(),
            output: PathBuf::from("out"),
            seed: 1,
        }
    }

    /// Full scale: 1e5 aspect ratios, levels to 1.01e5.
    pub fn full_scale() -> Self {
        let mut cfg = Self::desk();
        cfg.ensemble.count = 100_000;
        cfg.emax = 1.01e5;
        cfg.grids.epsilon = LinearGrid { start: 1e3, stop: 1e5, step: 1.0 };
        cfg.grids.window_epsilon = 1e5;
        cfg.grids.rigidity_epsilon = GeometricGrid { start: 1e3, stop: 1e5, count: 11 };
        cfg
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let cfg: Self = toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("run configuration is always representable")
    }

    /// First 16 hex digits of the SHA-256 of the canonical TOML form, with
    /// the output directory blanked so results do not depend on where they
    /// are written.
    pub fn hash(&self) -> String {
        let canonical = Self { output: PathBuf::new(), ..self.clone() };
        hex::encode(Sha256::digest(canonical.to_toml().as_bytes()))[..16].to_string()
    }

    /// Sets the ensemble seed and the acceptance seed together.
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self.ensemble.seed = seed;
        self
    }

    pub fn validate(&self) -> CliResult<()> {
        self.ensemble.validate().map_err(|e| CliError::Config(e.to_string()))?;
        if !(self.emax > 0.0 && self.emax.is_finite()) {
            return Err(CliError::Config(format!("emax must be positive, got {}", self.emax)));
        }
        let g = &self.grids;
        g.epsilon.validate("epsilon")?;
        g.omega.validate("omega")?;
        g.rigidity_epsilon.validate("rigidity_epsilon")?;
        g.lengths.validate("lengths")?;
        if g.epsilon.stop > self.emax || g.window_epsilon + 0.5 * g.omega.stop > self.emax {
            return Err(CliError::Config("energy grids must stay below emax".into()));
        }
        if g.rigidity_epsilon.stop + 0.5 * g.lengths.start > self.emax {
            return Err(CliError::Config("rigidity energies leave no room for windows below emax".into()));
        }
        self.po_config().validate().map_err(|e| CliError::Config(e.to_string()))?;
        Ok(())
    }

    pub fn alphas(&self) -> Vec<f64> {
        match self.system {
            SystemKind::Rectangular => {
                glvar_core::sample_aspect_ratios(&self.ensemble).expect("validated distribution")
            }
            SystemKind::QuarterCircle => vec![1.0],
        }
    }

    pub fn po_config(&self) -> PoSumConfig {
        let p = &self.po;
        PoSumConfig {
            mmax: p.mmax,
            min_mmax: p.min_mmax,
            tolerance: p.tolerance,
            mode: p.mode,
            mu: 0.5,
            maslov_phase: p.maslov_phase,
            include_self_cosine: p.include_self_cosine,
            tail_completion: p.tail_completion,
            energy_scale: EnergyScale::Unfolded,
            averaging: Averaging::Ensemble(self.ensemble),
        }
    }
}
