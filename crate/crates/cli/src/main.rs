mod config;
mod error;
mod run;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use crate::config::{Cli, Format, RunConfig, TOL_ENV};
use crate::error::CliError;
use crate::run::Outcome;

fn render(outcome: &Outcome, format: Format) -> String {
    match format {
        // serde_json::Value keeps object keys sorted
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&outcome.report).expect("json values serialize");
            s.push('\n');
            s
        }
        Format::Table => outcome.table.clone(),
    }
}

fn execute(cli: Cli) -> Result<i32, CliError> {
    let tol_env = std::env::var(TOL_ENV).ok();
    let config = RunConfig::from_cli(cli, tol_env.as_deref())?;
    let outcome = run::run(&config)?;
    let text = render(&outcome, config.format);
    match &config.output {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(outcome.exit_code())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("fmetric: {e}");
            ExitCode::from(2)
        }
    }
}
