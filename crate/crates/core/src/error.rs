use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("level count below emax would exceed the cap ({estimate} > {cap})")]
    LevelCap { estimate: usize, cap: usize },

    #[error("Bessel zero j_{{{order},{index}}} did not converge (last bracket [{lo}, {hi}])")]
    ZeroFinder {
        order: u32,
        index: usize,
        lo: f64,
        hi: f64,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("Weyl counter is not monotone at raw energy {energy}")]
    NonMonotoneCounter { energy: f64 },

    #[error("energy {epsilon} outside the completeness bound {emax}")]
    OutOfRange { epsilon: f64, emax: f64 },

    #[error("ensemble has {count} spectra, need at least {needed}")]
    InsufficientEnsemble { count: usize, needed: usize },

    #[error("no rigidity plateau at epsilon = {epsilon} over L in [{l_min}, {l_max}]")]
    NoPlateau { epsilon: f64, l_min: f64, l_max: f64 },

    #[error("malformed cache file {path}: {reason}")]
    CorruptCache { path: PathBuf, reason: String },

    #[error("orbit sum not converged at mmax = {mmax}: relative change {estimate:.3e} exceeds {tolerance:.1e}")]
    Truncation {
        mmax: u32,
        estimate: f64,
        tolerance: f64,
    },

    #[error("malformed series CSV: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
