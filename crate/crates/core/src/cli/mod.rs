//! Command-line front end.

mod commands;
mod config;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

pub use commands::{
    check_report, cmd_chenfliess, cmd_check, cmd_compare, cmd_simulate, cmd_sweep, nearest_sample, write_compare_csv,
    write_trajectory, CheckReport, RunOptions,
};
pub use config::{
    preset, preset_toml, ChenFliessConfig, CheckConfig, ControllerRun, ExperimentConfig, LbsConfig, RandomBatch,
    StepPolicy, PRESETS, UNDITHERED_STEP,
};

use crate::error::{Error, Result};

#[derive(Debug, Parser)]
#[command(name = "lieadapt", version, about = "Adaptive stabilization by Lie-bracket approximation: simulate, compare, sweep, check")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// TOML experiment file.
    #[arg(long, global = true, value_name = "PATH", conflicts_with = "preset")]
    pub config: Option<PathBuf>,

    /// Built-in experiment.
    #[arg(long, global = true, value_name = "NAME")]
    pub preset: Option<Preset>,

    /// Output directory (overrides `output.dir`).
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,

    /// Also integrate the averaged system (`simulate`).
    #[arg(long, global = true)]
    pub with_lbs: bool,

    /// Seed for random initial-condition batches.
    #[arg(long, global = true, value_name = "N", default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
}

impl Preset {
    pub fn name(self) -> &'static str {
        match self {
            Preset::Fig1 => "fig1",
            Preset::Fig2 => "fig2",
            Preset::Fig3 => "fig3",
            Preset::Fig4 => "fig4",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Closed loop from each initial state.
    Simulate,
    /// Several controllers from one initial state, aligned in `compare.csv`.
    Compare,
    /// Oscillatory vs. averaged distance over a list of frequencies.
    Sweep,
    /// Averaging assumptions and the Nussbaum property as a JSON report.
    Check,
    /// Chen-Fliess series integration against the ode1 reference orbit.
    Chenfliess,
}

/// Exit status for a failed command: 2 for configuration problems, 1 otherwise.
pub fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Config(_) => 2,
        _ => 1,
    }
}

fn load(cli: &Cli) -> Result<(ExperimentConfig, Option<String>)> {
    match (&cli.config, cli.preset) {
        (Some(path), _) => Ok((ExperimentConfig::load(path)?, None)),
        (None, Some(p)) => {
            let text = preset_toml(p.name()).expect("every preset has a config");
            Ok((ExperimentConfig::from_toml_str(&text)?, Some(text)))
        }
        (None, None) => Err(Error::Config("one of --config PATH or --preset NAME is required".into())),
    }
}

/// Runs a parsed command line, printing written paths to stdout.
pub fn run(cli: &Cli) -> Result<Vec<PathBuf>> {
    let (cfg, preset_text) = load(cli)?;
    let opts = RunOptions {
        out_dir: cli.out.clone(),
        with_lbs: cli.with_lbs,
        seed: cli.seed,
    };
    let mut written = match cli.command {
        Command::Simulate => cmd_simulate(&cfg, &opts)?,
        Command::Compare => cmd_compare(&cfg, &opts)?,
        Command::Sweep => cmd_sweep(&cfg, &opts)?,
        Command::Check => {
            let (report, files) = cmd_check(&cfg, &opts)?;
            let _ = writeln!(std::io::stdout().lock(), "{}", serde_json::to_string_pretty(&report)?);
            files
        }
        Command::Chenfliess => cmd_chenfliess(&cfg, &opts)?,
    };
    if let Some(text) = preset_text {
        let path = opts.out_dir.clone().unwrap_or_else(|| cfg.out_dir.clone()).join("config.toml");
        std::fs::write(&path, text)?;
        written.push(path);
    }
    Ok(written)
}

/// Entry point shared by the binary: parse, run, map errors to exit codes.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(paths) => {
            let mut out = std::io::stdout().lock();
            for p in paths {
                let _ = writeln!(out, "{}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
