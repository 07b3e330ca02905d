//! Spectrum cache files.
//!
//! One file per `(system, alpha, emax)`, named `<system>-<key16>.spec` where
//! `key16` is the first 16 hex digits of the generator key. Layout: a text
//! header of `name=value` lines closed by an empty line, then `count`
//! little-endian `f64` levels.
//!
//! ```text
//! glvar-spectrum v1
//! system=rectangular
//! alpha=1.0213
//! alpha_bits=3ff0573eab367a10
//! emax=21000
//! emax_bits=40d4820000000000
//! units=mean-spacing
//! generator=glvar-core 0.1.0
//! key=<sha256 of the generator inputs>
//! count=20873
//!
//! <binary levels>
//! ```
//!
//! A file is valid when the schema line, key, count and payload length all
//! agree and the levels are strictly increasing.

use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::spectra::{qcb_levels, rb_levels, QuarterCircularBilliard, RectangularBilliard};
use crate::spectrum::{Spectrum, SystemKind};

pub const CACHE_SCHEMA: &str = "glvar-spectrum v1";
pub const GENERATOR: &str = concat!("glvar-core ", env!("CARGO_PKG_VERSION"));

/// Content hash of the generator inputs.
pub fn cache_key(system: SystemKind, alpha: f64, emax: f64) -> String {
    let mut h = Sha256::new();
    h.update(CACHE_SCHEMA.as_bytes());
    h.update(system.as_str().as_bytes());
    h.update(alpha.to_bits().to_le_bytes());
    h.update(emax.to_bits().to_le_bytes());
    h.update(GENERATOR.as_bytes());
    hex::encode(h.finalize())
}

pub fn cache_path(dir: &Path, system: SystemKind, alpha: f64, emax: f64) -> PathBuf {
    let key = cache_key(system, alpha, emax);
    dir.join(format!("{}-{}.spec", system.as_str(), &key[..16]))
}

pub fn encode(spectrum: &Spectrum) -> Vec<u8> {
    let key = cache_key(spectrum.system, spectrum.alpha, spectrum.emax);
    let header = format!(
        "{CACHE_SCHEMA}\nsystem={}\nalpha={}\nalpha_bits={:016x}\nemax={}\nemax_bits={:016x}\n\
         units=mean-spacing\ngenerator={GENERATOR}\nkey={key}\ncount={}\n\n",
        spectrum.system.as_str(),
        spectrum.alpha,
        spectrum.alpha.to_bits(),
        spectrum.emax,
        spectrum.emax.to_bits(),
        spectrum.levels.len(),
    );
    let mut out = header.into_bytes();
    out.reserve(8 * spectrum.levels.len());
    for x in &spectrum.levels {
        out.extend_from_slice(&x.to_le_bytes());
    }
    out
}

pub fn decode(bytes: &[u8], path: &Path) -> Result<Spectrum> {
    let corrupt = |reason: String| Error::CorruptCache {
        path: path.to_path_buf(),
        reason,
    };
    let split = bytes
        .windows(2)
        .position(|w| w == b"\n\n")
        .ok_or_else(|| corrupt("missing header terminator".into()))?;
    let header =
        std::str::from_utf8(&bytes[..split]).map_err(|_| corrupt("header is not UTF-8".into()))?;
    let payload = &bytes[split + 2..];
    let mut lines = header.lines();
    if lines.next() != Some(CACHE_SCHEMA) {
        return Err(corrupt("unknown schema".into()));
    }
    let mut system = None;
    let mut alpha = None;
    let mut emax = None;
    let mut key = None;
    let mut count = None;
    for line in lines {
        let (name, value) = line
            .split_once('=')
            .ok_or_else(|| corrupt(format!("bad header line {line:?}")))?;
        let bits = |v: &str| u64::from_str_radix(v, 16).ok().map(f64::from_bits);
        match name {
            "system" => system = SystemKind::parse(value),
            "alpha_bits" => alpha = bits(value),
            "emax_bits" => emax = bits(value),
            "key" => key = Some(value.to_string()),
            "count" => count = value.parse::<usize>().ok(),
            _ => {}
        }
    }
    let (system, alpha, emax, key, count) = match (system, alpha, emax, key, count) {
        (Some(s), Some(a), Some(e), Some(k), Some(c)) => (s, a, e, k, c),
        _ => return Err(corrupt("incomplete header".into())),
    };
    if key != cache_key(system, alpha, emax) {
        return Err(corrupt("key does not match generator inputs".into()));
    }
    if payload.len() != 8 * count {
        return Err(corrupt(format!(
            "payload holds {} bytes, header promises {count} levels",
            payload.len()
        )));
    }
    let levels = payload
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("chunk of 8")))
        .collect();
    Spectrum::new(system, alpha, levels, emax).map_err(|e| corrupt(e.to_string()))
}

pub fn write_spectrum(path: &Path, spectrum: &Spectrum) -> Result<()> {
    let tmp = path.with_extension("spec.tmp");
    fs::write(&tmp, encode(spectrum))?;
    fs::rename(&tmp, path)?;
    Ok(())
}

pub fn read_spectrum(path: &Path) -> Result<Spectrum> {
    decode(&fs::read(path)?, path)
}

pub fn generate(system: SystemKind, alpha: f64, emax: f64, cap: usize) -> Result<Spectrum> {
    match system {
        SystemKind::Rectangular => rb_levels(&RectangularBilliard::new(alpha)?, emax, cap),
        SystemKind::QuarterCircle => qcb_levels(&QuarterCircularBilliard::default(), emax, cap),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CacheStatus {
    Hit,
    Written,
    Regenerated,
}

/// Returns the cached spectrum when its file is valid, otherwise generates
/// it and (re)writes the file.
pub fn ensure_cached(
    dir: &Path,
    system: SystemKind,
    alpha: f64,
    emax: f64,
    cap: usize,
) -> Result<(Spectrum, CacheStatus)> {
    let path = cache_path(dir, system, alpha, emax);
    let existed = path.exists();
    if existed {
        if let Ok(s) = read_spectrum(&path) {
            if s.system == system && s.alpha.to_bits() == alpha.to_bits() {
                return Ok((s, CacheStatus::Hit));
            }
        }
    }
    let spectrum = generate(system, alpha, emax, cap)?;
    write_spectrum(&path, &spectrum)?;
    let status = if existed {
        CacheStatus::Regenerated
    } else {
        CacheStatus::Written
    };
    Ok((spectrum, status))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let (s, status) = ensure_cached(dir.path(), SystemKind::Rectangular, 1.1, 500.0, usize::MAX).unwrap();
        assert_eq!(status, CacheStatus::Written);
        let (again, status) =
            ensure_cached(dir.path(), SystemKind::Rectangular, 1.1, 500.0, usize::MAX).unwrap();
        assert_eq!(status, CacheStatus::Hit);
        assert_eq!(again, s);

        let path = cache_path(dir.path(), SystemKind::Rectangular, 1.1, 500.0);
        let mut bytes = fs::read(&path).unwrap();
        bytes[0] = b'X';
        fs::write(&path, &bytes).unwrap();
        assert!(read_spectrum(&path).is_err());
        let (fixed, status) =
            ensure_cached(dir.path(), SystemKind::Rectangular, 1.1, 500.0, usize::MAX).unwrap();
        assert_eq!(status, CacheStatus::Regenerated);
        assert_eq!(fixed, s);
    }

    #[test]
    fn truncated_payload_is_rejected() {
        let s = generate(SystemKind::Rectangular, 0.9, 200.0, usize::MAX).unwrap();
        let mut bytes = encode(&s);
        bytes.truncate(bytes.len() - 3);
        assert!(decode(&bytes, Path::new("x")).is_err());
    }
}
