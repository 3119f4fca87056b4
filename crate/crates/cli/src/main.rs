//! `glt`: experiment driver for spectral symbols and spectral relative errors.

mod commands;
mod selftest;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use glt_core::experiment::ExperimentConfig;

#[derive(Parser)]
#[command(
    name = "glt",
    version,
    about = "Spectral symbols, rearrangements and spectral relative errors"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
pub struct Common {
    /// Flat `key = value` configuration file.
    #[arg(long, short)]
    config: Option<PathBuf>,
    /// Override one configuration key (repeatable), e.g. `--set n=1000`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Write `<name>.csv`, `<name>.json` and `<name>.timing.json` here
    /// instead of printing the CSV.
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Assemble the FD matrix or IgA pencil and print it as text.
    Assemble(Common),
    /// Eigenvalues of the discretization.
    Eig(Common),
    /// Sample the spectral symbol on a grid.
    Symbol {
        #[command(flatten)]
        common: Common,
        /// Samples per axis.
        #[arg(long, default_value_t = 65)]
        samples: usize,
    },
    /// Sample the monotone rearrangement of the symbol.
    Rearrange(Common),
    /// Compare discrete eigenvalues with the exact spectrum.
    Compare(Common),
    /// Reproduce a table (1-4).
    Table {
        id: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Produce figure series (2-6).
    Figure {
        id: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Fast built-in checks; exit code 2 on a tolerance failure.
    Selftest,
}

/// Defaults, then the config file, then `--set` overrides.
pub fn load_config(base: ExperimentConfig, common: &Common) -> anyhow::Result<ExperimentConfig> {
    let mut c = base;
    if let Some(path) = &common.config {
        c.merge_file(path)?;
    }
    for s in &common.set {
        c.apply_override(s)?;
    }
    if let Some(dir) = &common.out {
        c.output_dir = Some(dir.clone());
    }
    c.validate()?;
    Ok(c)
}

fn init_threads() -> anyhow::Result<()> {
    if let Ok(v) = std::env::var("GLT_THREADS") {
        let n: usize = v
            .trim()
            .parse()
            .with_context(|| format!("GLT_THREADS must be a positive integer, got '{v}'"))?;
        anyhow::ensure!(n > 0, "GLT_THREADS must be positive");
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    init_threads()?;
    match cli.command {
        Command::Assemble(c) => commands::assemble(&c)?,
        Command::Eig(c) => commands::eig(&c)?,
        Command::Symbol { common, samples } => commands::symbol(&common, samples)?,
        Command::Rearrange(c) => commands::rearrange(&c)?,
        Command::Compare(c) => commands::compare(&c)?,
        Command::Table { id, common } => commands::table(id, &common)?,
        Command::Figure { id, common } => commands::figure(id, &common)?,
        Command::Selftest => {
            return Ok(if selftest::run() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            });
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
