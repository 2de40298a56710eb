//! Command-line front end for `gabor-rp-core`: the window grammar, JSON run
//! reports, CSV side files and TOML configuration.

pub mod cli;
pub mod config;
pub mod error;
pub mod grammar;
pub mod io;
pub mod report;

pub use cli::{execute, run, Cli, Outcome};
pub use config::Settings;
pub use error::{CliError, Result};
pub use grammar::parse_window;
pub use report::{canonical_body, RunReport, SCHEMA_VERSION};
