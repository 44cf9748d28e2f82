//! Batch front end for the `polycm` verification suites.
//!
//! Each `cmd_*` function runs one suite and returns a [`Report`] together
//! with the exit status it implies: 0 when everything verified, 1 on a
//! verification failure. Usage problems map to 2 and numeric capability
//! problems to 3 through [`CliError::exit_code`].

pub mod commands;
pub mod config;
pub mod error;
pub mod report;

pub use commands::{cmd_bounds, cmd_check_cm, cmd_classify, cmd_inequalities, cmd_kernels, Outcome};
pub use config::{Cli, Command, Format, RunConfig};
pub use error::CliError;
pub use report::{Cell, Entry, Finding, Report};

/// Runs the suite selected by `cfg.command`.
pub fn run(cfg: &RunConfig) -> Result<Outcome, CliError> {
    cfg.validate()?;
    match cfg.command {
        Command::Classify => cmd_classify(cfg),
        Command::CheckCm => cmd_check_cm(cfg),
        Command::Kernels => cmd_kernels(cfg),
        Command::Inequalities => cmd_inequalities(cfg),
        Command::Bounds => cmd_bounds(cfg),
    }
}
