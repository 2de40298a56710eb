//! Default tolerances and grid sizes. Values come from the built-in defaults,
//! then the TOML file named by `GABOR_RP_CONFIG`, then command-line flags.
//!
//! ```toml
//! tol = 1e-10
//! grid = 4096
//! c_grid = 512
//! inflation = 1.1
//! verdict_grid = 256
//! event_grid = 128
//! zak_grid = 64
//! eps = 0.1
//! trials = 100
//! ```

use std::path::Path;

use gabor_rp_core::constants::{DEFAULT_C_GRID, DEFAULT_GRID, DEFAULT_INFLATION};
use gabor_rp_core::frame::DEFAULT_VERDICT_GRID;
use gabor_rp_core::zak::DEFAULT_TOL;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

pub const CONFIG_ENV: &str = "GABOR_RP_CONFIG";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Settings {
    /// Truncation tolerance for Zak series and tails.
    pub tol: f64,
    /// Grid for `K`, `q`, `R`.
    pub grid: usize,
    /// Grid for `C`.
    pub c_grid: usize,
    pub inflation: f64,
    /// Grid for verdicts on windows without a Lipschitz Zak transform.
    pub verdict_grid: usize,
    /// Grid for raw Monte Carlo events.
    pub event_grid: usize,
    pub zak_grid: usize,
    pub eps: f64,
    pub trials: u64,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            grid: DEFAULT_GRID,
            c_grid: DEFAULT_C_GRID,
            inflation: DEFAULT_INFLATION,
            verdict_grid: DEFAULT_VERDICT_GRID,
            event_grid: 128,
            zak_grid: 64,
            eps: 0.1,
            trials: 100,
        }
    }
}

impl Settings {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
        toml::from_str(&text).map_err(|e| CliError::Config { path: path.to_path_buf(), message: e.to_string() })
    }

    /// Defaults, overlaid with the file named by `GABOR_RP_CONFIG` if set.
    pub fn from_env() -> Result<Self> {
        match std::env::var_os(CONFIG_ENV) {
            Some(p) if !p.is_empty() => Self::from_file(Path::new(&p)),
            _ => Ok(Self::default()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    #[test]
    fn partial_file_keeps_defaults() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "tol = 1e-8\ntrials = 7").unwrap();
        let s = Settings::from_file(f.path()).unwrap();
        assert_eq!(s.tol, 1e-8);
        assert_eq!(s.trials, 7);
        assert_eq!(s.grid, DEFAULT_GRID);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "tolerance = 1e-8").unwrap();
        assert!(matches!(Settings::from_file(f.path()), Err(CliError::Config { .. })));
    }
}
