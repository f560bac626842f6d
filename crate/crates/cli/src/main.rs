//! `lsmdg`: runs the one-dimensional LS-MDG-ICE experiments and writes their CSV tables.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 configuration error, 3 solver stall or failed
//! solve, 4 reference solution failure.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use log::LevelFilter;

use commands::Outcome;
use config::Settings;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] lsmdg::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        use lsmdg::Error as E;
        match self {
            CliError::Config(_) => 2,
            CliError::Io(_) => 1,
            CliError::Core(E::InvalidArgument(_) | E::Unsupported(_)) => 2,
            CliError::Core(E::Oracle(_)) => 4,
            CliError::Core(E::Inadmissible(_) | E::InvalidGeometry { .. } | E::SolveFailure { .. }) => 3,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "lsmdg", version, about = "Least-squares moving DG with interface condition enforcement, 1D experiments")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Flat key=value file; flags and --set override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Directory receiving the CSV files.
    #[arg(long, global = true, default_value = ".")]
    csv_dir: PathBuf,
    #[arg(long, global = true, default_value = "info")]
    log_level: LevelFilter,
    /// Extra KEY=VALUE setting, repeatable.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    sets: Vec<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Linear ODE study comparing three test-space formulations (ode_study.csv).
    OdeStudy {
        #[arg(long, allow_hyphen_values = true)]
        p: Option<String>,
        /// Comma-separated cell counts.
        #[arg(long, allow_hyphen_values = true)]
        cells: Option<String>,
        /// Comma-separated subset of equal_order, reduced_order, trial_to_test.
        #[arg(long, allow_hyphen_values = true)]
        formulation: Option<String>,
    },
    /// Advection-diffusion boundary layer: single solve, convergence study or interface table.
    BoundaryLayer {
        /// solve, convergence or table.
        #[arg(long, allow_hyphen_values = true)]
        mode: Option<String>,
        /// Peclet number (comma-separated list in table mode).
        #[arg(long, allow_hyphen_values = true)]
        pe: Option<String>,
        /// Degree (comma-separated list in convergence and table modes).
        #[arg(long, allow_hyphen_values = true)]
        p: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        cells: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        moving: Option<String>,
        /// Comma-separated cell counts of a convergence study.
        #[arg(long, allow_hyphen_values = true)]
        schedule: Option<String>,
    },
    /// Stationary viscous Burgers shock.
    Burgers {
        /// solve or convergence.
        #[arg(long, allow_hyphen_values = true)]
        mode: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        epsilon: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        p: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        cells: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        moving: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        schedule: Option<String>,
    },
    /// Navier-Stokes normal shock compared with a reference ODE profile.
    NsShock {
        #[arg(long, allow_hyphen_values = true)]
        mach: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        reynolds: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        prandtl: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        p: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        cells: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        moving: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        oracle_step: Option<String>,
    },
}

fn settings(common: &Common, command: &Command) -> Result<Settings, CliError> {
    let mut s = match &common.config {
        Some(path) => Settings::from_file(path)?,
        None => Settings::default(),
    };
    for pair in &common.sets {
        s.set_pair(pair)?;
    }
    match command {
        Command::OdeStudy { p, cells, formulation } => {
            s.set_opt("p", p.as_ref());
            s.set_opt("cells", cells.as_ref());
            s.set_opt("formulation", formulation.as_ref());
        }
        Command::BoundaryLayer { mode, pe, p, cells, moving, schedule } => {
            s.set_opt("mode", mode.as_ref());
            s.set_opt("pe", pe.as_ref());
            s.set_opt("p", p.as_ref());
            s.set_opt("cells", cells.as_ref());
            s.set_opt("moving", moving.as_ref());
            s.set_opt("schedule", schedule.as_ref());
        }
        Command::Burgers { mode, epsilon, p, cells, moving, schedule } => {
            s.set_opt("mode", mode.as_ref());
            s.set_opt("epsilon", epsilon.as_ref());
            s.set_opt("p", p.as_ref());
            s.set_opt("cells", cells.as_ref());
            s.set_opt("moving", moving.as_ref());
            s.set_opt("schedule", schedule.as_ref());
        }
        Command::NsShock { mach, reynolds, prandtl, p, cells, moving, oracle_step } => {
            s.set_opt("mach", mach.as_ref());
            s.set_opt("reynolds", reynolds.as_ref());
            s.set_opt("prandtl", prandtl.as_ref());
            s.set_opt("p", p.as_ref());
            s.set_opt("cells", cells.as_ref());
            s.set_opt("moving", moving.as_ref());
            s.set_opt("oracle_step", oracle_step.as_ref());
        }
    }
    Ok(s)
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let s = settings(&cli.common, &cli.command)?;
    let dir = &cli.common.csv_dir;
    match cli.command {
        Command::OdeStudy { .. } => commands::ode_study(s, dir),
        Command::BoundaryLayer { .. } => commands::boundary_layer(s, dir),
        Command::Burgers { .. } => commands::burgers(s, dir),
        Command::NsShock { .. } => commands::ns_shock(s, dir),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    env_logger::Builder::new().filter_level(cli.common.log_level).format_timestamp(None).init();
    match run(&cli) {
        Ok(Outcome::Settled) => ExitCode::SUCCESS,
        Ok(Outcome::Unsettled) => {
            log::error!("at least one solve stalled; results were written but are not trustworthy");
            ExitCode::from(3)
        }
        Err(e) => {
            log::error!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}
