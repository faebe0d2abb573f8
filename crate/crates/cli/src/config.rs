use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use serde::Serialize;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Audit the uncertainty relation on seeded Haar-random states.
    Verify,
    /// Evaluate the relation's margin and symmetric bound for a given phase.
    Bound,
    /// Minimum-uncertainty (Harper ground) states at one angle.
    Minstate,
    /// Exact and relaxed symmetric bounds over a range of dimensions.
    #[value(name = "figure1")]
    #[serde(rename = "figure1")]
    Figure1,
    /// Boundary of the accessible (|<U>|, |<V>|) region.
    Frontier,
    /// Spectrum statistics of the generator commutator.
    CommutatorStats,
    /// Correlation identities and feasibility verdict for a signal.
    SignalCheck,
    /// Discretized Gaussian state and its localization checks.
    Gaussian,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Verify => "verify",
            Command::Bound => "bound",
            Command::Minstate => "minstate",
            Command::Figure1 => "figure1",
            Command::Frontier => "frontier",
            Command::CommutatorStats => "commutator-stats",
            Command::SignalCheck => "signal-check",
            Command::Gaussian => "gaussian",
        }
    }

    fn is_tabular(self) -> bool {
        matches!(self, Command::Figure1 | Command::Frontier)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Command-line flags as typed by the user.
#[derive(Debug, Parser)]
#[command(
    name = "clockshift",
    version,
    about = "Clock/shift uncertainty relations, minimum-uncertainty states and signal audits"
)]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,
    /// Dimension (period) d.
    #[arg(long, default_value_t = 8)]
    pub d: usize,
    /// Harper angle in [0, pi/2].
    #[arg(long, default_value_t = FRAC_PI_4)]
    pub theta: f64,
    /// Commutation phase for `bound`; defaults to 2*pi/d.
    #[arg(long)]
    pub phi: Option<f64>,
    /// Gaussian width.
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Number of random states.
    #[arg(long, default_value_t = 1000)]
    pub count: usize,
    /// Window around 1 for the commutator statistic.
    #[arg(long, default_value_t = 1e-10)]
    pub tolerance: f64,
    /// Localization half-width delta in (0, pi/2].
    #[arg(long, default_value_t = 0.5)]
    pub delta: f64,
    #[arg(long = "d-min", default_value_t = 2)]
    pub d_min: usize,
    #[arg(long = "d-max", default_value_t = 32)]
    pub d_max: usize,
    /// Number of theta samples on [0, pi/2] for `frontier`.
    #[arg(long, default_value_t = 65)]
    pub points: usize,
    /// Shift power m for `verify` (pair U, V^m).
    #[arg(long, default_value_t = 1)]
    pub m: usize,
    /// Dispersion of U for `bound`.
    #[arg(long)]
    pub du2: Option<f64>,
    /// Dispersion of V for `bound`.
    #[arg(long)]
    pub dv2: Option<f64>,
    /// Claimed |R(1)| for `signal-check` without an input signal.
    #[arg(long)]
    pub r1: Option<f64>,
    /// Claimed |T(1)| for `signal-check` without an input signal.
    #[arg(long)]
    pub t1: Option<f64>,
    /// Signal file: CSV with columns j,re,im or a JSON array of [re, im].
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Write the artifact here instead of stdout.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// Output format; csv for figure1/frontier, json otherwise.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Worker threads for figure1.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

/// Fully resolved configuration; echoed into every artifact.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub d: usize,
    pub theta: f64,
    pub phi: f64,
    pub sigma: f64,
    pub seed: u64,
    pub count: usize,
    pub tolerance: f64,
    pub delta: f64,
    pub d_min: usize,
    pub d_max: usize,
    pub points: usize,
    pub m: usize,
    pub du2: Option<f64>,
    pub dv2: Option<f64>,
    pub r1: Option<f64>,
    pub t1: Option<f64>,
    pub input: Option<PathBuf>,
    pub output: Option<PathBuf>,
    pub format: Format,
    pub jobs: usize,
}

fn fundamental_phase(d: usize) -> f64 {
    if d == 2 {
        PI
    } else {
        TAU / d as f64
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn unit_interval(name: &str, x: Option<f64>) -> Result<(), CliError> {
    match x {
        Some(v) if !(0.0..=1.0).contains(&v) => {
            Err(usage(format!("--{name} must lie in [0, 1], got {v}")))
        }
        _ => Ok(()),
    }
}

impl RunConfig {
    /// Resolves defaults and checks every field the command uses.
    pub fn resolve(cli: Cli) -> Result<Self, CliError> {
        let format = cli.format.unwrap_or(if cli.command.is_tabular() {
            Format::Csv
        } else {
            Format::Json
        });
        let config = RunConfig {
            command: cli.command,
            d: cli.d,
            theta: cli.theta,
            phi: cli.phi.unwrap_or_else(|| fundamental_phase(cli.d)),
            sigma: cli.sigma,
            seed: cli.seed,
            count: cli.count,
            tolerance: cli.tolerance,
            delta: cli.delta,
            d_min: cli.d_min,
            d_max: cli.d_max,
            points: cli.points,
            m: cli.m,
            du2: cli.du2,
            dv2: cli.dv2,
            r1: cli.r1,
            t1: cli.t1,
            input: cli.input,
            output: cli.output,
            format,
            jobs: cli.jobs,
        };
        config.validate()?;
        Ok(config)
    }

    /// A configuration with every default applied.
    pub fn defaults(command: Command) -> Self {
        Self::resolve(Cli::parse_from(["clockshift", command.name()])).expect("defaults are valid")
    }

    pub fn validate(&self) -> Result<(), CliError> {
        use Command::*;
        if self.format == Format::Csv && !self.command.is_tabular() {
            return Err(usage(format!("{} produces JSON only", self.command.name())));
        }
        if self.jobs == 0 {
            return Err(usage("--jobs must be at least 1"));
        }
        let uses_d = !matches!(self.command, Figure1)
            && !(self.command == SignalCheck && self.input.is_some());
        if uses_d && self.d < 2 {
            return Err(usage(format!("--d must be at least 2, got {}", self.d)));
        }
        match self.command {
            Verify => {
                if self.count == 0 {
                    return Err(usage("--count must be at least 1"));
                }
                if self.m == 0 || self.m >= self.d {
                    return Err(usage(format!("--m must lie in 1..=d-1, got {}", self.m)));
                }
            }
            Bound => {
                if !(self.phi > 0.0 && self.phi <= PI) {
                    return Err(usage(format!(
                        "--phi must lie in (0, pi], got {}",
                        self.phi
                    )));
                }
                unit_interval("du2", self.du2)?;
                unit_interval("dv2", self.dv2)?;
                if self.du2.is_some() != self.dv2.is_some() {
                    return Err(usage("--du2 and --dv2 must be given together"));
                }
            }
            Minstate => {
                if !(0.0..=FRAC_PI_2).contains(&self.theta) {
                    return Err(usage(format!(
                        "--theta must lie in [0, pi/2], got {}",
                        self.theta
                    )));
                }
            }
            Figure1 => {
                if self.d_min < 2 || self.d_min > self.d_max {
                    return Err(usage(format!(
                        "need 2 <= --d-min <= --d-max, got {}..{}",
                        self.d_min, self.d_max
                    )));
                }
            }
            Frontier => {
                if self.points == 0 {
                    return Err(usage("--points must be at least 1"));
                }
            }
            CommutatorStats => {
                if !(self.tolerance >= 0.0 && self.tolerance.is_finite()) {
                    return Err(usage(format!(
                        "--tolerance must be finite and >= 0, got {}",
                        self.tolerance
                    )));
                }
            }
            SignalCheck => {
                unit_interval("r1", self.r1)?;
                unit_interval("t1", self.t1)?;
                if self.r1.is_some() != self.t1.is_some() {
                    return Err(usage("--r1 and --t1 must be given together"));
                }
                if self.r1.is_some() && self.input.is_some() {
                    return Err(usage("--input cannot be combined with --r1/--t1"));
                }
            }
            Gaussian => {
                if !(self.sigma > 0.0 && self.sigma.is_finite()) {
                    return Err(usage(format!(
                        "--sigma must be positive, got {}",
                        self.sigma
                    )));
                }
                if !(self.delta > 0.0 && self.delta <= FRAC_PI_2) {
                    return Err(usage(format!(
                        "--delta must lie in (0, pi/2], got {}",
                        self.delta
                    )));
                }
            }
        }
        Ok(())
    }
}
