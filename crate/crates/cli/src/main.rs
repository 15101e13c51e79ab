mod commands;
mod config;
mod output;

use std::io;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use thiserror::Error;
use uniaxial_core::Observable;

use crate::config::{Accepts, GlobalArgs, RunConfig};
use crate::output::{emit, Table};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),

    #[error(transparent)]
    Core(#[from] uniaxial_core::Error),

    #[error("i/o: {0}")]
    Io(#[from] io::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("{failed} of {total} acceptance criteria failed")]
    Acceptance { failed: usize, total: usize },
}

fn core_exit_code(e: &uniaxial_core::Error) -> u8 {
    use uniaxial_core::Error as E;
    match e {
        E::InvalidParameter(_) => 2,
        E::Sweep { source, .. } => core_exit_code(source),
        _ => 3,
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Acceptance { .. } => 1,
            CliError::Core(e) => core_exit_code(e),
            CliError::Config(_) | CliError::Io(_) | CliError::Csv(_) | CliError::Json(_) => 2,
        }
    }
}

/// Ground states, finite-size scaling and entanglement of the uniaxial
/// collective-spin model and its adiabatic Dicke reduction.
#[derive(Debug, Parser)]
#[command(name = "uniaxial", version)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Ground-state energy and wavefunction amplitudes
    Ground,
    /// Exact, 1/N-analytic and critical spin moments
    Moments,
    /// One-tangle, pairwise concurrence and block linear entropy
    Entangle {
        /// Block size L for the block linear entropy [default: N/2]
        #[arg(long)]
        block: Option<usize>,
    },
    /// Adiabatic Dicke moments, concurrence and qubit-field tangle
    Dicke,
    /// Critical quartic-oscillator constants and e0(zeta)
    Quartic {
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        zeta: Option<Vec<f64>>,
    },
    /// Sweep an observable over N and fit a power law
    Scaling {
        #[arg(long, default_value = "sz2")]
        observable: Observable,
        /// Smallest N included in the fit
        #[arg(long)]
        fit_min: Option<usize>,
        /// Largest N included in the fit
        #[arg(long)]
        fit_max: Option<usize>,
    },
    /// Figure data; all four into the --out directory when --fig is absent
    Figures {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
        fig: Option<u8>,
    },
    /// Run the acceptance suite
    Verify {
        /// Criterion ids to run [default: all]
        #[arg(long, value_delimiter = ',')]
        criterion: Option<Vec<u8>>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Ground => "ground",
            Command::Moments => "moments",
            Command::Entangle { .. } => "entangle",
            Command::Dicke => "dicke",
            Command::Quartic { .. } => "quartic",
            Command::Scaling { .. } => "scaling",
            Command::Figures { .. } => "figures",
            Command::Verify { .. } => "verify",
        }
    }

    fn accepts(&self) -> Accepts {
        match self {
            Command::Ground | Command::Moments | Command::Entangle { .. } => Accepts {
                d_ratio: false,
                epsilon: true,
            },
            Command::Dicke => Accepts {
                d_ratio: true,
                epsilon: false,
            },
            Command::Scaling { observable, .. } => Accepts {
                d_ratio: observable.needs_d_ratio(),
                epsilon: !observable.needs_d_ratio(),
            },
            Command::Figures { fig } => Accepts {
                d_ratio: matches!(fig, None | Some(3) | Some(4)),
                epsilon: false,
            },
            Command::Quartic { .. } | Command::Verify { .. } => Accepts::default(),
        }
    }
}

fn write_table(t: &Table, cfg: &RunConfig, command: &str, path: Option<&Path>) -> Result<(), CliError> {
    emit(&t.render(cfg, command)?, path)
}

fn run(cli: Cli) -> Result<(), CliError> {
    let name = cli.command.name();
    let cfg = RunConfig::resolve(cli.global, cli.command.accepts())?;
    if let Some(w) = cfg.workers {
        rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build_global()
            .map_err(|e| CliError::Config(format!("worker pool: {e}")))?;
    }
    let out = cfg.out.as_deref();
    let table = match cli.command {
        Command::Ground => commands::ground_cmd(&cfg)?,
        Command::Moments => commands::moments_cmd(&cfg)?,
        Command::Entangle { block } => commands::entangle_cmd(&cfg, block)?,
        Command::Dicke => commands::dicke_cmd(&cfg)?,
        Command::Quartic { zeta } => commands::quartic_cmd(zeta)?,
        Command::Scaling {
            observable,
            fit_min,
            fit_max,
        } => commands::scaling_cmd(&cfg, observable, (fit_min, fit_max))?,
        Command::Figures { fig: Some(f) } => commands::figure(&cfg, f)?,
        Command::Figures { fig: None } => {
            let dir: PathBuf = out
                .ok_or_else(|| CliError::Config("figures without --fig needs --out DIR".into()))?
                .to_path_buf();
            let ext = match cfg.format {
                config::Format::Csv => "csv",
                config::Format::Json => "json",
            };
            for f in 1..=4 {
                let t = commands::figure(&cfg, f)?;
                write_table(&t, &cfg, name, Some(&dir.join(format!("fig{f}.{ext}"))))?;
            }
            return Ok(());
        }
        Command::Verify { criterion } => {
            let (t, reports) = commands::verify_cmd(criterion)?;
            let failed = reports.iter().filter(|r| !r.passed).count();
            println!("acceptance: {} passed, {failed} failed", reports.len() - failed);
            if out.is_some() {
                write_table(&t, &cfg, name, out)?;
            }
            if failed > 0 {
                return Err(CliError::Acceptance {
                    failed,
                    total: reports.len(),
                });
            }
            return Ok(());
        }
    };
    write_table(&table, &cfg, name, out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
