//! Command-line surface and the validated run configuration.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use polycm::cm_engine::FamilyIndex;
use polycm::grid::{GridScale, GridSpec};
use polycm::kernels::KernelId;
use polycm::{Execution, PrecisionConfig};
use serde::Serialize;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Scale {
    Log,
    Linear,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Classify,
    CheckCm,
    Kernels,
    Inequalities,
    Bounds,
}

#[derive(Debug, Parser)]
#[command(name = "polycm", version, about = "Complete-monotonicity checks for [ψ⁽ᵐ⁾(x)]² + ψ⁽ⁿ⁾(x)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Sub,
}

#[derive(Debug, Subcommand)]
pub enum Sub {
    /// Classify f_{m,n} for 1 ≤ m ≤ m-max, 1 ≤ n ≤ n-max.
    Classify(CommonArgs),
    /// Sign check of (−1)ˡ f⁽ˡ⁾ on a grid for one index pair.
    CheckCm(CommonArgs),
    /// Monotonicity, limits and ranges of the Laplace kernels.
    Kernels(CommonArgs),
    /// Two-sided elementary bounds for ψ and ψ⁽ᵏ⁾, k ≤ orders.
    Inequalities(CommonArgs),
    /// Polynomial bounds on f'_{m,2n} for m ≤ m-max, n ≤ n-max.
    Bounds(CommonArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    #[arg(long, default_value_t = 6)]
    pub m_max: u32,
    #[arg(long, default_value_t = 6)]
    pub n_max: u32,
    /// Highest derivative order (check-cm) or polygamma order (inequalities).
    #[arg(long, default_value_t = 8)]
    pub orders: u32,
    #[arg(long, default_value_t = 0.01)]
    pub grid_min: f64,
    #[arg(long, default_value_t = 100.0)]
    pub grid_max: f64,
    #[arg(long, default_value_t = 200)]
    pub grid_count: usize,
    #[arg(long, value_enum, default_value_t = Scale::Log)]
    pub grid_scale: Scale,
    /// Absolute error target for polygamma evaluation.
    #[arg(long, default_value_t = 1e-12)]
    pub precision: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Single index pair "m,n" (check-cm, bounds).
    #[arg(long, value_parser = parse_index)]
    pub index: Option<(u32, u32)>,
    /// Kernel to report: omega, tanh, kappa or h<k> such as h-2 (kernels).
    #[arg(long, value_parser = parse_kernel)]
    pub kernel: Option<KernelId>,
    /// Evaluate on the calling thread only.
    #[arg(long)]
    pub sequential: bool,
}

fn parse_index(s: &str) -> Result<(u32, u32), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected m,n but got {s:?}"))?;
    let m = a.trim().parse().map_err(|e| format!("bad m: {e}"))?;
    let n = b.trim().parse().map_err(|e| format!("bad n: {e}"))?;
    Ok((m, n))
}

fn parse_kernel(s: &str) -> Result<KernelId, String> {
    match s {
        "omega" => Ok(KernelId::Omega),
        "tanh" => Ok(KernelId::TanhKernel),
        "kappa" => Ok(KernelId::Kappa),
        _ => s
            .strip_prefix('h')
            .and_then(|k| k.parse().ok())
            .map(KernelId::H)
            .ok_or_else(|| format!("unknown kernel {s:?}")),
    }
}

/// Validated configuration of one run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub m_max: u32,
    pub n_max: u32,
    pub max_order: u32,
    pub grid: GridSpec,
    pub precision: f64,
    pub format: Format,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    pub index: Option<FamilyIndex>,
    pub kernel: Option<KernelId>,
    #[serde(skip)]
    pub execution: Execution,
}

impl RunConfig {
    /// Defaults for `command`, matching the command-line defaults.
    pub fn new(command: Command) -> Self {
        RunConfig {
            command,
            m_max: 6,
            n_max: 6,
            max_order: 8,
            grid: GridSpec::standard(),
            precision: 1e-12,
            format: Format::Json,
            out: None,
            index: None,
            kernel: None,
            execution: Execution::Parallel,
        }
    }

    pub fn from_cli(cli: Cli) -> Result<Self, CliError> {
        let (command, a) = match cli.command {
            Sub::Classify(a) => (Command::Classify, a),
            Sub::CheckCm(a) => (Command::CheckCm, a),
            Sub::Kernels(a) => (Command::Kernels, a),
            Sub::Inequalities(a) => (Command::Inequalities, a),
            Sub::Bounds(a) => (Command::Bounds, a),
        };
        let index = a
            .index
            .map(|(m, n)| FamilyIndex::new(m, n))
            .transpose()?;
        let cfg = RunConfig {
            command,
            m_max: a.m_max,
            n_max: a.n_max,
            max_order: a.orders,
            grid: GridSpec {
                min: a.grid_min,
                max: a.grid_max,
                count: a.grid_count,
                scale: match a.grid_scale {
                    Scale::Log => GridScale::Log,
                    Scale::Linear => GridScale::Linear,
                },
            },
            precision: a.precision,
            format: a.format,
            out: a.out,
            index,
            kernel: a.kernel,
            execution: if a.sequential {
                Execution::Sequential
            } else {
                Execution::Parallel
            },
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.m_max == 0 || self.n_max == 0 {
            return Err(CliError::Usage("--m-max and --n-max must be positive".into()));
        }
        if !(self.grid.min > 0.0 && self.grid.min.is_finite()) {
            return Err(CliError::Usage("--grid-min must be positive".into()));
        }
        if !(self.grid.max > self.grid.min && self.grid.max.is_finite()) {
            return Err(CliError::Usage("--grid-max must exceed --grid-min".into()));
        }
        if self.grid.count < 2 {
            return Err(CliError::Usage("--grid-count must be at least 2".into()));
        }
        if !(self.precision > 0.0 && self.precision.is_finite()) {
            return Err(CliError::Usage("--precision must be positive".into()));
        }
        Ok(())
    }

    pub fn precision_config(&self) -> PrecisionConfig {
        PrecisionConfig::with_target(self.precision)
    }
}
