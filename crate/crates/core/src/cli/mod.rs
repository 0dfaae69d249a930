//! `star-battery` command line: resolves a system config, runs one protocol
//! and writes CSV traces with a `#`-comment manifest prelude.
//!
//! Exit codes: 0 on success, 2 for usage or configuration problems, 3 when
//! the numerics or the trace analysis fail.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::config::{ConfigFile, SystemConfig};
use crate::correlations::Units;
use crate::error::{Error, Result};

pub use output::RunManifest;

#[derive(Debug, Parser)]
#[command(name = "star-battery", version, about = "Star-topology spin quantum battery simulator")]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(subcommand)]
    pub command: Command,
}

/// Flags shared by every subcommand; they override the config file.
#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Config file (TOML key = value).
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Number of charger spins.
    #[arg(long, global = true)]
    pub n: Option<usize>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub epsilon: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub gamma: Option<f64>,
    /// Fully polarized spins (ε = γ = 1).
    #[arg(long, global = true)]
    pub pure: bool,
    /// Samples per period of the swept variable.
    #[arg(long, global = true)]
    pub grid: Option<usize>,
    /// Output directory.
    #[arg(long, global = true, value_name = "DIR", default_value = ".")]
    pub out: PathBuf,
    /// Entropy units.
    #[arg(long, global = true, default_value = "bits")]
    pub units: Units,
    #[arg(long, global = true, value_name = "SECONDS")]
    pub t1_battery: Option<f64>,
    #[arg(long, global = true, value_name = "SECONDS")]
    pub t1_charger: Option<f64>,
    #[arg(long, global = true, value_name = "HZ")]
    pub coupling_j: Option<f64>,
    #[arg(long, global = true, value_name = "HZ")]
    pub coupling_j_bl: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Battery energy against charging phase θ.
    Charge {
        /// Also measure Γ = τ̄_1/τ̄_N over several charger counts.
        #[arg(long)]
        advantage: bool,
        /// Charger counts for --advantage.
        #[arg(long, value_delimiter = ',')]
        ns: Option<Vec<usize>>,
    },
    /// Battery ergotropy along the charging sweep.
    Ergotropy,
    /// Entanglement entropy and battery/charger discord.
    Correlations {
        /// Coarse directions in the discord search.
        #[arg(long)]
        directions: Option<usize>,
    },
    /// Repeated charging separated by relaxation delays.
    Asymptotic {
        #[arg(long, value_name = "SECONDS")]
        delta_min: Option<f64>,
        #[arg(long, value_name = "SECONDS")]
        delta_max: Option<f64>,
        #[arg(long)]
        delta_steps: Option<usize>,
        #[arg(long)]
        iterations: Option<usize>,
    },
    /// Charge, store and discharge into a load spin.
    Qcbl {
        /// Storage time before the discharge sweep.
        #[arg(long, value_name = "SECONDS", default_value_t = 0.0)]
        storage: f64,
        #[arg(long, value_name = "SECONDS")]
        storage_max: Option<f64>,
        #[arg(long)]
        storage_steps: Option<usize>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Charge { .. } => "charge",
            Command::Ergotropy => "ergotropy",
            Command::Correlations { .. } => "correlations",
            Command::Asymptotic { .. } => "asymptotic",
            Command::Qcbl { .. } => "qcbl",
        }
    }
}

impl CommonArgs {
    /// Config file (or defaults) with the command-line overrides applied.
    pub fn resolve(&self) -> Result<ConfigFile> {
        let mut file = match &self.config {
            Some(path) => ConfigFile::load(path)?,
            None => {
                let n = self
                    .n
                    .ok_or_else(|| Error::Config("either --config or --n is required".into()))?;
                ConfigFile {
                    system: SystemConfig {
                        n_chargers: n,
                        gamma: 1.0,
                        epsilon: 1e-5,
                        coupling_j_hz: None,
                        coupling_j_bl_hz: None,
                        t1_battery_s: None,
                        t1_charger_s: None,
                    },
                    charge: Default::default(),
                    ergotropy: Default::default(),
                    correlations: Default::default(),
                    asymptotic: Default::default(),
                    qcbl: Default::default(),
                }
            }
        };
        let s = &mut file.system;
        if let Some(n) = self.n {
            s.n_chargers = n;
        }
        if let Some(e) = self.epsilon {
            s.epsilon = e;
        }
        if let Some(g) = self.gamma {
            s.gamma = g;
        }
        if self.pure {
            s.epsilon = 1.0;
            s.gamma = 1.0;
        }
        s.t1_battery_s = self.t1_battery.or(s.t1_battery_s);
        s.t1_charger_s = self.t1_charger.or(s.t1_charger_s);
        s.coupling_j_hz = self.coupling_j.or(s.coupling_j_hz);
        s.coupling_j_bl_hz = self.coupling_j_bl.or(s.coupling_j_bl_hz);
        s.validate()?;
        Ok(file)
    }
}

/// 2 for bad input, 3 for numerical or analysis failures.
pub fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Config(_) | Error::Domain(_) | Error::Dimension(_) | Error::Resource(_) => 2,
        Error::InvalidState(_) | Error::Analysis(_) => 3,
    }
}

pub fn run(cli: &Cli) -> Result<()> {
    let file = cli.common.resolve()?;
    std::fs::create_dir_all(&cli.common.out)
        .map_err(|e| Error::Config(format!("{}: {e}", cli.common.out.display())))?;
    let ctx = commands::Context {
        file,
        common: cli.common.clone(),
        subcommand: cli.command.name(),
    };
    match &cli.command {
        Command::Charge { advantage, ns } => commands::cmd_charge(&ctx, *advantage, ns.as_deref()),
        Command::Ergotropy => commands::cmd_ergotropy(&ctx),
        Command::Correlations { directions } => commands::cmd_correlations(&ctx, *directions),
        Command::Asymptotic {
            delta_min,
            delta_max,
            delta_steps,
            iterations,
        } => commands::cmd_asymptotic(&ctx, *delta_min, *delta_max, *delta_steps, *iterations),
        Command::Qcbl {
            storage,
            storage_max,
            storage_steps,
        } => commands::cmd_qcbl(&ctx, *storage, *storage_max, *storage_steps),
    }
}

struct StderrLogger;

impl log::Log for StderrLogger {
    fn enabled(&self, metadata: &log::Metadata) -> bool {
        metadata.level() <= log::Level::Warn
    }

    fn log(&self, record: &log::Record) {
        if self.enabled(record.metadata()) {
            eprintln!("{}: {}", record.level().as_str().to_lowercase(), record.args());
        }
    }

    fn flush(&self) {}
}

static LOGGER: StderrLogger = StderrLogger;

/// Binary entry point.
pub fn main() -> ExitCode {
    if log::set_logger(&LOGGER).is_ok() {
        log::set_max_level(log::LevelFilter::Warn);
    }
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}
