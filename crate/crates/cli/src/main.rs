use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use fuzzy_ck_cli::config::{BranchSpec, RunConfig};
use fuzzy_ck_cli::{
    apply_overrides, cmd_certify, cmd_oracles, cmd_run, load_config_text, CliError, Overrides,
    EXIT_ERROR,
};

/// Batch solver for fuzzy Darboux problems under mixed fractional calculus.
#[derive(Parser)]
#[command(name = "fuzzy-ck", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the configured problem; write a solution table and a report.
    Run(JobArgs),
    /// Evaluate contraction constants and print the certificate.
    Certify(JobArgs),
    /// Run the numerical cross-check battery and print a pass/fail table.
    Oracles,
}

#[derive(Args)]
struct JobArgs {
    /// Bundled config name (example_3_9, example_4_4) or path to a TOML file.
    config: String,
    /// Override grid node counts, e.g. `--grid 65,65`.
    #[arg(long, value_name = "N,M")]
    grid: Option<String>,
    /// Override the number of r-levels.
    #[arg(long, value_name = "K")]
    levels: Option<usize>,
    /// Override the convergence tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Override the iteration cap.
    #[arg(long)]
    max_iter: Option<usize>,
    /// Override the integral-equation branch.
    #[arg(long, value_parser = ["s1", "s2"])]
    branch: Option<String>,
    /// Directory for output artifacts.
    #[arg(long, value_name = "DIR", default_value = ".")]
    out: PathBuf,
    /// Override the sampling seed.
    #[arg(long)]
    seed: Option<u64>,
}

impl JobArgs {
    fn overrides(&self) -> Result<Overrides, CliError> {
        let grid = match &self.grid {
            None => None,
            Some(text) => {
                let parts: Vec<&str> = text.split(',').collect();
                let parse = |s: &str| {
                    s.trim().parse::<usize>().map_err(|e| {
                        CliError::Config(format!("--grid: expected `N,M`, got `{text}` ({e})"))
                    })
                };
                match parts.as_slice() {
                    [n, m] => Some((parse(n)?, parse(m)?)),
                    _ => {
                        return Err(CliError::Config(format!(
                            "--grid: expected `N,M`, got `{text}`"
                        )))
                    }
                }
            }
        };
        let branch = match self.branch.as_deref() {
            None => None,
            Some("s1") => Some(BranchSpec::S1),
            Some("s2") => Some(BranchSpec::S2),
            Some(other) => {
                return Err(CliError::Config(format!(
                    "--branch: expected s1 or s2, got `{other}`"
                )))
            }
        };
        Ok(Overrides {
            grid,
            levels: self.levels,
            tol: self.tol,
            max_iter: self.max_iter,
            branch,
            seed: self.seed,
        })
    }

    fn load(&self) -> Result<(String, RunConfig), CliError> {
        let (name, text) = load_config_text(&self.config)?;
        let mut config = RunConfig::from_toml(&text)?;
        apply_overrides(&mut config, &self.overrides()?);
        Ok((name, config))
    }
}

fn dispatch(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Run(args) => {
            let (name, config) = args.load()?;
            cmd_run(&name, &config, &args.out)
        }
        Command::Certify(args) => {
            let (name, config) = args.load()?;
            cmd_certify(&name, &config, &args.out)
        }
        Command::Oracles => cmd_oracles(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_ERROR as u8)
        }
    }
}
