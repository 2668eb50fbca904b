use std::path::PathBuf;
use std::str::FromStr;

use clap::{Parser, ValueEnum};
use fmetric::sweep::DEFAULT_EPSILONS;
use fmetric::Generator;

use crate::error::CliError;

pub const TOL_ENV: &str = "FMETRIC_TOL";

const DEFAULT_CERTIFY_EPSILONS: [f64; 3] = [0.1, 1.0, 10.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Verify,
    Induce,
    Certify,
    MinAlpha,
    Search,
    Sweep,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Verify => "verify",
            Command::Induce => "induce",
            Command::Certify => "certify",
            Command::MinAlpha => "min-alpha",
            Command::Search => "search",
            Command::Sweep => "sweep",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Table,
}

/// Batch verification of F-metric spaces.
#[derive(Debug, Parser)]
#[command(name = "fmetric", version, about)]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,

    /// Space document (.json) or separated-values table (.csv, .tsv).
    #[arg(long)]
    pub space: Option<PathBuf>,

    /// Generator name: log, neg_inverse, log_plus_linear.
    #[arg(long, default_value = "log")]
    pub generator: String,

    /// Slack alpha on the raw scale (e.g. ln 3 = 1.0986122886681098 for log).
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub alpha: f64,

    /// Comma-separated positive epsilons.
    #[arg(long)]
    pub epsilons: Option<String>,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    #[arg(long)]
    pub trials: Option<u64>,

    #[arg(long)]
    pub n: Option<usize>,

    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Write the report here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// A validated invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub space_path: Option<PathBuf>,
    pub generator: Generator,
    pub alpha: f64,
    pub epsilons: Vec<f64>,
    pub seed: u64,
    pub trials: u64,
    pub n: usize,
    pub output: Option<PathBuf>,
    pub format: Format,
    pub tol: f64,
}

impl RunConfig {
    /// `tol_env` is the raw value of [`TOL_ENV`], if set.
    pub fn from_cli(cli: Cli, tol_env: Option<&str>) -> Result<Self, CliError> {
        let generator = Generator::from_str(&cli.generator)?;
        if !(cli.alpha >= 0.0) || !cli.alpha.is_finite() {
            return Err(CliError::Usage(format!("--alpha must be a finite nonnegative real, got {}", cli.alpha)));
        }
        let tol = match tol_env {
            None => fmetric::DEFAULT_TOL,
            Some(raw) => match raw.trim().parse::<f64>() {
                Ok(t) if t >= 0.0 && t.is_finite() => t,
                _ => return Err(CliError::Usage(format!("{TOL_ENV} must be a finite nonnegative real, got `{raw}`"))),
            },
        };

        let needs_space = matches!(cli.command, Command::Verify | Command::Induce | Command::Certify | Command::MinAlpha);
        if needs_space && cli.space.is_none() {
            return Err(CliError::Usage(format!("{} requires --space", cli.command.name())));
        }

        let (n, trials) = match cli.command {
            Command::Search | Command::Sweep => {
                let n = cli.n.ok_or_else(|| CliError::Usage(format!("{} requires --n", cli.command.name())))?;
                let trials =
                    cli.trials.ok_or_else(|| CliError::Usage(format!("{} requires --trials", cli.command.name())))?;
                if trials == 0 {
                    return Err(CliError::Usage("--trials must be at least 1".into()));
                }
                if n < 2 {
                    return Err(CliError::Usage("--n must be at least 2".into()));
                }
                (n, trials)
            }
            _ => (cli.n.unwrap_or(0), cli.trials.unwrap_or(0)),
        };

        let epsilons = match &cli.epsilons {
            Some(list) => parse_epsilons(list)?,
            None if cli.command == Command::Sweep => DEFAULT_EPSILONS.to_vec(),
            None => DEFAULT_CERTIFY_EPSILONS.to_vec(),
        };

        Ok(RunConfig {
            command: cli.command,
            space_path: cli.space,
            generator,
            alpha: cli.alpha,
            epsilons,
            seed: cli.seed,
            trials,
            n,
            output: cli.output,
            format: cli.format,
            tol,
        })
    }
}

pub fn parse_epsilons(list: &str) -> Result<Vec<f64>, CliError> {
    let values = list
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| match s.parse::<f64>() {
            Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
            _ => Err(CliError::Usage(format!("invalid epsilon `{s}`"))),
        })
        .collect::<Result<Vec<_>, _>>()?;
    if values.is_empty() {
        return Err(CliError::Usage("--epsilons is empty".into()));
    }
    Ok(values)
}
