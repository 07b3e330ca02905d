//! Driver for the spectral statistics library: spectrum caches, figure
//! tables and plots, orbit sums and the acceptance suite.

pub mod accept;
pub mod config;
pub mod error;
pub mod figures;
pub mod measure;
pub mod oracles;
pub mod source;
pub mod svg;
pub mod table;
pub mod theory;

pub use config::RunConfig;
pub use error::{CliError, CliResult};
