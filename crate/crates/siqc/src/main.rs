use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use siqc::commands;
use siqc::config::{AppConfig, ScenarioConfig};
use siqc::output::{self, Format};
use siqc::schedule_file::ScheduleFile;
use siqc::CliError;
use siqc_core::cooling::CoolingPolicy;
use siqc_core::schedule::PulseSchedule;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

/// Feasibility analysis for a silicon nuclear-spin-chain quantum computer.
#[derive(Debug, Parser)]
#[command(name = "siqc", version)]
struct Cli {
    /// JSON configuration with optional `device` and `analysis` sections.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format; each subcommand has its own default.
    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,
    /// Seed for thermal noise and lattice jitter.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for parallel sweeps.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Device summary: couplings, magnet field, bridge mechanics, T₂ terms.
    DesignReport,
    /// Minimum polarization and gate counts over a sweep of register sizes.
    ScalabilityCurve,
    /// Hadamard decoupling schedule as a schedule file.
    Schedule,
    /// Density-matrix simulation of a schedule from a product state.
    SimulateDynamics {
        /// Schedule file; generated from the configuration when omitted.
        #[arg(long)]
        schedule: Option<PathBuf>,
        /// Scenario JSON; the configuration's `analysis.dynamics` when omitted.
        #[arg(long)]
        scenario: Option<PathBuf>,
    },
    /// Recursive majority-compression cooling.
    #[command(group(ArgGroup::new("policy").required(true).args(["target_p", "rounds"])))]
    Cooling {
        #[arg(long)]
        n0: usize,
        #[arg(long)]
        p0: f64,
        #[arg(long)]
        target_p: Option<f64>,
        #[arg(long)]
        rounds: Option<usize>,
    },
    /// Full decoherence budget for one register size.
    Budget,
    /// Time-domain multiplexed readout with lock-in demodulation.
    Readout,
}

fn read_json<T: serde::de::DeserializeOwned>(path: &PathBuf) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::InvalidConfig(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::InvalidConfig(format!("{}: {e}", path.display())))
}

fn run(cli: &Cli) -> Result<String, CliError> {
    let cfg = match &cli.config {
        Some(path) => AppConfig::load(path)?,
        None => AppConfig::default(),
    };
    let pick = |default: Format| match cli.format {
        Some(FormatArg::Csv) => Format::Csv,
        Some(FormatArg::Json) => Format::Json,
        None => default,
    };
    let seed = cli.seed;
    match &cli.command {
        Command::DesignReport => {
            let r = commands::design_report(&cfg, seed)?;
            match pick(Format::Json) {
                Format::Json => output::json(&r),
                Format::Csv => output::key_value_csv(&r),
            }
        }
        Command::ScalabilityCurve => {
            let points = commands::scalability_curve(&cfg, seed)?;
            match pick(Format::Csv) {
                Format::Json => output::json(&points),
                Format::Csv => output::scalability_csv(&points, &cfg.analysis.t2_other),
            }
        }
        Command::Schedule => {
            let s = commands::schedule(&cfg)?;
            match pick(Format::Json) {
                Format::Json => output::json(&ScheduleFile::from(&s)),
                Format::Csv => output::pulses_csv(&s),
            }
        }
        Command::SimulateDynamics { schedule, scenario } => {
            let schedule: PulseSchedule = match schedule {
                Some(path) => read_json::<ScheduleFile>(path)?.try_into()?,
                None => commands::schedule(&cfg)?,
            };
            let scenario: ScenarioConfig = match scenario {
                Some(path) => read_json(path)?,
                None => cfg.analysis.dynamics.clone(),
            };
            let rows = commands::simulate_dynamics(&cfg, &schedule, &scenario)?;
            match pick(Format::Csv) {
                Format::Json => output::json(&rows),
                Format::Csv => output::dynamics_csv(&rows),
            }
        }
        Command::Cooling { n0, p0, target_p, rounds } => {
            let policy = match (target_p, rounds) {
                (Some(t), _) => CoolingPolicy::TargetBias(*t),
                (None, Some(r)) => CoolingPolicy::Rounds(*r),
                (None, None) => unreachable!("clap requires one policy"),
            };
            let r = commands::cooling(*n0, *p0, policy)?;
            match pick(Format::Json) {
                Format::Json => output::json(&r),
                Format::Csv => output::key_value_csv(&r),
            }
        }
        Command::Budget => {
            let b = commands::budget(&cfg, seed)?;
            match pick(Format::Json) {
                Format::Json => output::json(&b),
                Format::Csv => output::key_value_csv(&b),
            }
        }
        Command::Readout => {
            let r = commands::readout(&cfg, seed)?;
            match pick(Format::Csv) {
                Format::Json => output::json(&r),
                Format::Csv => output::readout_csv(&r),
            }
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build_global() {
            log::warn!("could not size the worker pool: {e}");
        }
    }
    let result = run(&cli).and_then(|text| {
        match &cli.out {
            Some(path) => std::fs::write(path, text)?,
            None => std::io::stdout().lock().write_all(text.as_bytes())?,
        }
        Ok(())
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
