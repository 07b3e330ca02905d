//! Where spectra come from: a cache directory when it holds a valid file,
//! otherwise direct generation.

use std::path::{Path, PathBuf};

use glvar_core::spectra::cache::{self, CacheStatus};
use glvar_core::spectra::DEFAULT_LEVEL_CAP;
use glvar_core::{Spectrum, SystemKind};
use rayon::prelude::*;

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};

#[derive(Clone, Debug)]
pub struct SpectrumSource {
    pub system: SystemKind,
    pub alphas: Vec<f64>,
    pub emax: f64,
    pub cache_dir: Option<PathBuf>,
}

impl SpectrumSource {
    pub fn from_config(cfg: &RunConfig, cache_dir: Option<PathBuf>) -> Self {
        Self { system: cfg.system, alphas: cfg.alphas(), emax: cfg.emax, cache_dir }
    }

    pub fn len(&self) -> usize {
        self.alphas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alphas.is_empty()
    }

    /// Spectrum `index`; never writes to the cache.
    pub fn load(&self, index: usize) -> CliResult<Spectrum> {
        let alpha = self.alphas[index];
        if let Some(dir) = &self.cache_dir {
            let path = cache::cache_path(dir, self.system, alpha, self.emax);
            if let Ok(s) = cache::read_spectrum(&path) {
                if s.system == self.system && s.alpha.to_bits() == alpha.to_bits() && s.emax == self.emax {
                    return Ok(s);
                }
            }
        }
        cache::generate(self.system, alpha, self.emax, DEFAULT_LEVEL_CAP)
            .map_err(|source| CliError::Spectrum { alpha, source })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct GenerateSummary {
    pub hits: usize,
    pub written: usize,
    pub regenerated: usize,
}

/// One cache file per aspect ratio; valid files are left untouched.
pub fn generate_caches(cfg: &RunConfig, dir: &Path) -> CliResult<GenerateSummary> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let statuses: Vec<CacheStatus> = cfg
        .alphas()
        .par_iter()
        .map(|&alpha| {
            cache::ensure_cached(dir, cfg.system, alpha, cfg.emax, DEFAULT_LEVEL_CAP)
                .map(|(_, status)| status)
                .map_err(|source| CliError::Spectrum { alpha, source })
        })
        .collect::<CliResult<_>>()?;
    let mut summary = GenerateSummary::default();
    for s in statuses {
        match s {
            CacheStatus::Hit => summary.hits += 1,
            CacheStatus::Written => summary.written += 1,
            CacheStatus::Regenerated => summary.regenerated += 1,
        }
    }
    Ok(summary)
}
