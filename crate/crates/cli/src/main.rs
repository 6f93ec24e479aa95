use clap::Parser;
use hamlab_cli::config::ExperimentConfig;
use hamlab_cli::experiments::{self, RunOptions, EXPERIMENTS};
use hamlab_cli::report::emit_report;
use std::path::PathBuf;
use std::process::ExitCode;

/// Batch experiment runner for the Hamiltonian reduction toolkit.
#[derive(Parser, Debug)]
#[command(name = "hamlab", version, about)]
struct Cli {
    /// Experiment kind (gadget-verify, chain-verify, hubbard-exchange,
    /// kp-band, coulomb-cu, dft-solve, hf-ising, erasure-scan, sw-scan).
    experiment: String,

    /// Configuration file path.
    #[arg(long)]
    config: PathBuf,

    /// PRNG seed override (default: `seed` from the config, else 1).
    #[arg(long)]
    seed: Option<u64>,

    /// Output directory for the CSV data and JSON summary.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Worker count for sweep points.
    #[arg(long, default_value_t = 1)]
    workers: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    run(cli)
}

fn run(cli: Cli) -> ExitCode {
    if !EXPERIMENTS.contains(&cli.experiment.as_str()) {
        eprintln!(
            "unknown experiment `{}`; expected one of {}",
            cli.experiment,
            EXPERIMENTS.join(", ")
        );
        return ExitCode::from(2);
    }
    let config = match ExperimentConfig::from_path(&cli.config) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("config error: {e}");
            return ExitCode::from(2);
        }
    };
    let seed = match (cli.seed, config.top_u64("seed")) {
        (Some(s), _) => s,
        (None, Ok(Some(s))) => s,
        (None, Ok(None)) => 1,
        (None, Err(e)) => {
            eprintln!("config error: {e}");
            return ExitCode::from(2);
        }
    };
    let opts = RunOptions {
        seed,
        workers: cli.workers.max(1),
        out: cli.out.clone(),
    };

    let (summary, tables) = match experiments::run(&cli.experiment, &config, &opts) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };

    if let Some(out) = &opts.out {
        if let Err(e) = emit_report(out, &summary, &tables) {
            eprintln!("cannot write report: {e}");
            return ExitCode::from(1);
        }
    } else {
        println!("{}", summary.to_json());
    }

    for a in &summary.assertions {
        let status = if a.passed { "pass" } else { "FAIL" };
        eprintln!(
            "[{status}] {}: value {:.6e}, threshold {:.6e}",
            a.name, a.value, a.threshold
        );
    }
    if let Some(failure) = summary.first_failure() {
        eprintln!("assertion failed: {}", failure.name);
        return ExitCode::from(1);
    }
    ExitCode::SUCCESS
}
