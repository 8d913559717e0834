use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use relaysel::config::ExperimentConfig;
use relaysel::harness::{consensus_trace, emit_csv, emit_trace, run_sweep, summarize};
use relaysel::Error;

#[derive(Parser)]
#[command(name = "relaysel", version, about = "Relay selection and consensus beamforming Monte Carlo runs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a sweep and write one CSV row per (method, sweep point, trial).
    Run {
        /// Flat `key = value` config file; defaults apply to missing keys.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = "results.csv")]
        out: PathBuf,
        /// `snr` or `m`.
        #[arg(long)]
        sweep: Option<String>,
        /// Comma-separated subset of none,lmmsec,smmsec,exhaustive.
        #[arg(long)]
        methods: Option<String>,
        #[arg(long)]
        trials: Option<usize>,
        /// `centralized` or `consensus`.
        #[arg(long)]
        solver: Option<String>,
        /// Also write the consensus trace of the first trial.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<(), Error> {
    let Command::Run { config, seed, out, sweep, methods, trials, solver, trace } = cli.command;
    let mut cfg = match &config {
        Some(path) => ExperimentConfig::from_file(path)?,
        None => ExperimentConfig::default(),
    };
    let overrides = [
        ("seed", seed.map(|s| s.to_string())),
        ("sweep", sweep),
        ("methods", methods),
        ("trials", trials.map(|t| t.to_string())),
        ("solver", solver),
    ];
    for (key, value) in overrides {
        if let Some(v) = value {
            cfg.set(key, &v)?;
        }
    }
    cfg.validate()?;

    let rows = run_sweep(&cfg)?;
    emit_csv(&rows, &out)?;
    log::info!("wrote {} rows to {}", rows.len(), out.display());

    println!(
        "{:<11} {:>8} {:>14} {:>12} {:>9} {:>6}",
        "method",
        cfg.sweep.as_str(),
        "mean_sinr_db",
        "mean_mmse",
        "selected",
        "failed"
    );
    for s in summarize(&rows) {
        println!(
            "{:<11} {:>8} {:>14.4} {:>12.6} {:>9.2} {:>6}",
            s.method.as_str(),
            s.sweep_value,
            s.mean_sinr_db,
            s.mean_mmse,
            s.mean_selected,
            s.failures
        );
    }

    if let Some(path) = trace {
        let records = consensus_trace(&cfg)?;
        emit_trace(&records, &path)?;
        log::info!("wrote {} trace records to {}", records.len(), path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
