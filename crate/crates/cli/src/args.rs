use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use subpoisson_core::{BranchConvention, PhaseMode};

#[derive(Debug, Parser)]
#[command(
    name = "subpoisson",
    version,
    about = "Photon statistics of self-phase-modulated pulses after dispersion"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Q(0) over a (psi0, phi) grid.
    SweepQ(CommonArgs),
    /// Closed-form <N_T(t)> over a (t, phi) grid.
    PulseEvolution(CommonArgs),
    /// Both engines at a single (psi0, phi, t).
    Point(CommonArgs),
    /// Laboratory example: dispersion lengths and optimum distances.
    Scenario(CommonArgs),
    /// Run the acceptance checks.
    Validate(CommonArgs),
}

impl Command {
    pub fn args(&self) -> &CommonArgs {
        match self {
            Command::SweepQ(a)
            | Command::PulseEvolution(a)
            | Command::Point(a)
            | Command::Scenario(a)
            | Command::Validate(a) => a,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Engine {
    #[default]
    Paraxial,
    Numeric,
}

impl Engine {
    pub fn name(self) -> &'static str {
        match self {
            Engine::Paraxial => "paraxial",
            Engine::Numeric => "numeric",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    #[default]
    PrincipalArctan,
    ContinuousArg,
}

impl From<Branch> for BranchConvention {
    fn from(b: Branch) -> Self {
        match b {
            Branch::PrincipalArctan => BranchConvention::PrincipalArctan,
            Branch::ContinuousArg => BranchConvention::ContinuousArg,
        }
    }
}

/// Kerr phase profile used by the numeric engine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Phase {
    Exact,
    #[default]
    Paraxial,
}

impl From<Phase> for PhaseMode {
    fn from(p: Phase) -> Self {
        match p {
            Phase::Exact => PhaseMode::Exact,
            Phase::Paraxial => PhaseMode::Paraxial,
        }
    }
}

/// Flags shared by every subcommand; each one overrides the matching config field.
#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// TOML config file.
    #[arg(long, short)]
    pub config: Option<PathBuf>,
    /// Output file; standard output when absent.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,

    #[arg(long)]
    pub psi0: Option<f64>,
    #[arg(long)]
    pub psi0_min: Option<f64>,
    #[arg(long)]
    pub psi0_max: Option<f64>,
    #[arg(long)]
    pub psi0_steps: Option<usize>,

    #[arg(long)]
    pub phi: Option<f64>,
    #[arg(long)]
    pub phi_min: Option<f64>,
    #[arg(long)]
    pub phi_max: Option<f64>,
    #[arg(long)]
    pub phi_steps: Option<usize>,

    /// Observation time in units of tau_p.
    #[arg(long, allow_hyphen_values = true)]
    pub time: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub time_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub time_max: Option<f64>,
    #[arg(long)]
    pub time_steps: Option<usize>,

    /// Sign of the group-velocity dispersion, +1 or -1.
    #[arg(long, allow_hyphen_values = true)]
    pub sign: Option<i64>,
    #[arg(long, value_enum)]
    pub branch: Option<Branch>,
    #[arg(long, value_enum)]
    pub engine: Option<Engine>,
    #[arg(long, value_enum)]
    pub phase: Option<Phase>,

    /// T / tau_p.
    #[arg(long)]
    pub t_ratio: Option<f64>,
    /// tau_p / tau_r.
    #[arg(long)]
    pub r_ratio: Option<f64>,
    #[arg(long)]
    pub nbar0: Option<f64>,

    #[arg(long)]
    pub grid_samples: Option<usize>,
    #[arg(long)]
    pub grid_half_span: Option<f64>,
    #[arg(long)]
    pub omega_nodes: Option<usize>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub max_nodes: Option<usize>,

    /// Use this psi0 in the scenario report instead of the B-integral estimate.
    #[arg(long)]
    pub psi0_override: Option<f64>,
}
