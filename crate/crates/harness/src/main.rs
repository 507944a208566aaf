//! Command-line entry point.

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use evqe_harness::error::{HarnessError, Result};
use evqe_harness::report;
use evqe_harness::scenario::{self, RunOptions, ScenarioConfig};

#[derive(Parser)]
#[command(
    name = "evqe",
    version,
    about = "Weighted and equal-weight ensemble eigensolver workbench"
)]
struct Cli {
    /// Overrides the scenario seed (run) or seeds the bootstrap (stats).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads; 1 runs strictly sequentially.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    /// Output directory; defaults to runs/<scenario-name> or the cwd.
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    /// Gaussian width for additionally exported smoothed plot curves.
    #[arg(long, global = true, default_value_t = 0.0)]
    smooth_sigma: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Runs a scenario JSON file and writes traces plus a summary.
    Run { config: PathBuf },
    /// Paired comparison of two run summaries (first minus second).
    Stats {
        #[arg(num_args = 2)]
        summaries: Vec<PathBuf>,
        /// Bootstrap resample count.
        #[arg(long, default_value_t = 2000)]
        resamples: usize,
        /// Band confidence level.
        #[arg(long, default_value_t = 0.95)]
        confidence: f64,
    },
    /// Prints the exact spectrum of an integrals or matrix file.
    Oracle { input: PathBuf },
}

fn main() {
    let cli = Cli::parse();
    if let Err(err) = dispatch(cli) {
        eprintln!("error: {err}");
        std::process::exit(err.exit_code());
    }
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run { config } => {
            let config = ScenarioConfig::read(&config)?;
            let options = RunOptions {
                threads: cli.threads,
                seed_override: cli.seed,
            };
            let out_dir = cli
                .out_dir
                .unwrap_or_else(|| scenario::default_out_dir(&config));
            let outcome = scenario::run_scenario(&config, &options)?;
            let written = report::write_outputs(&outcome, &out_dir, cli.smooth_sigma)?;
            let converged = outcome
                .trials
                .iter()
                .filter(|t| t.status_label() == "gradient_converged")
                .count();
            println!(
                "{}: {} runs ({} converged), {} files in {}",
                outcome.config.name,
                outcome.trials.len(),
                converged,
                written.len(),
                out_dir.display()
            );
            Ok(())
        }
        Command::Stats {
            summaries,
            resamples,
            confidence,
        } => {
            let first = report::read_summary(&summaries[0])?;
            let second = report::read_summary(&summaries[1])?;
            let seed = cli.seed.unwrap_or(2025);
            let stat = report::stat_report(&first, &second, confidence, resamples, seed)?;
            let out_dir = cli.out_dir.unwrap_or_else(|| PathBuf::from("."));
            let path = out_dir.join("stats.json");
            report::write_stat_report(&stat, &path)?;
            for point in &stat.points {
                let scan = point
                    .scan_value
                    .map(|v| format!("{v}"))
                    .unwrap_or_else(|| "-".into());
                println!(
                    "scan {scan}: statistic {}, p {} (adjusted {}){}",
                    point.statistic,
                    point.p_raw,
                    point.p_adjusted,
                    if point.significant { " *" } else { "" }
                );
            }
            println!("wrote {}", path.display());
            Ok(())
        }
        Command::Oracle { input } => {
            for value in oracle_spectrum(&input)? {
                println!("{value:+.12e}");
            }
            Ok(())
        }
    }
}

/// Exact ascending spectrum of an integrals file (mapped over the full
/// orbital set) or of a plain symmetric matrix file.
fn oracle_spectrum(path: &PathBuf) -> Result<Vec<f64>> {
    let text = std::fs::read_to_string(path)?;
    let first = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty())
        .unwrap_or_default();
    if first.to_ascii_uppercase().starts_with("&FCI") {
        let data = evqe_core::fcidump::parse_fcidump(&text)?;
        let n = data.integrals.orbital_count();
        let spec = evqe_core::fermion::ActiveSpaceSpec::full(n, data.electron_count);
        let reduced = evqe_core::fermion::freeze_core(&data.integrals, &spec)?;
        let operator = evqe_core::fermion::jordan_wigner(&reduced)?;
        if operator.qubit_count() > scenario::MAX_ORACLE_QUBITS {
            return Err(HarnessError::Config(format!(
                "spectrum needs {} qubits; the exact route stops at {}",
                operator.qubit_count(),
                scenario::MAX_ORACLE_QUBITS
            )));
        }
        Ok(operator.to_dense()?.eigendecompose()?.eigenvalues)
    } else {
        let matrix = evqe_core::qdft::OneBodyMatrix::parse(&text)?;
        Ok(matrix.to_dense()?.eigendecompose()?.eigenvalues)
    }
}
