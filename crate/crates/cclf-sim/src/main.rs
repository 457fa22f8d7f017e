use std::path::PathBuf;
use std::process::ExitCode;

use cclf_sim::audit::audit_trajectory;
use cclf_sim::check::run_checks;
use cclf_sim::config::parse_config;
use cclf_sim::csvio;
use cclf_sim::plot::render_plots;
use cclf_sim::sweep::{format_table, run_sweep};
use cclf_sim::{CliError, EXIT_VALIDATION};
use cclf_core::sim::run_scenario;
use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

/// Multi-agent waypoint navigation with Hamilton's-rule altruism filters.
#[derive(Parser)]
#[command(name = "cclf-sim", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate a scenario file, write CSV logs, manifest, and SVG plots.
    Run {
        /// Scenario JSON file.
        config: PathBuf,
        /// Output directory.
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Recompute the collaborative invariant from a logged trajectory and
    /// cross-check it against the persisted values.
    Audit {
        /// Path to a trajectory.csv (manifest.json and metrics.csv must sit
        /// next to it).
        trajectory: PathBuf,
    },
    /// Re-run a scenario varying one agent's weight and tabulate path
    /// lengths and arrival times.
    Sweep {
        /// Scenario JSON file.
        config: PathBuf,
        /// Comma-separated weight values for the swept agent.
        #[arg(long, value_delimiter = ',', required = true)]
        weights: Vec<f64>,
        /// Index of the agent whose weight is swept.
        #[arg(long, default_value_t = 0)]
        agent: usize,
    },
    /// Run the built-in invariant suite (finite-difference and QP oracles).
    Check,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_VALIDATION,
            };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run { config, out } => {
            let started = csvio::start_timestamp();
            let scenario = parse_config(&config)?;
            let log = run_scenario(&scenario).map_err(CliError::runtime)?;
            let files = csvio::write_outputs(&log, &out, started)?;
            render_plots(&log, &out)?;

            println!("wrote {}", files.trajectory_csv.display());
            println!("wrote {}", files.metrics_csv.display());
            println!("wrote {}", files.manifest_json.display());
            println!("wrote {}", files.trajectory_svg.display());
            println!("wrote {}", files.phi2_svg.display());
            for (i, (arrival, length)) in log
                .summary
                .arrival_times
                .iter()
                .zip(&log.summary.path_lengths)
                .enumerate()
            {
                let arrival = arrival
                    .map(|t| format!("{t:.2} s"))
                    .unwrap_or_else(|| "not reached".to_string());
                println!("agent {i}: goal {arrival}, path {length:.3} m");
            }
            if let Some(t) = log.summary.deadlock_time {
                println!("deadlock detected at {t:.2} s");
            }
            Ok(())
        }
        Command::Audit { trajectory } => {
            let report = audit_trajectory(&trajectory)?;
            println!(
                "audited {} steps x {} agents: max phi2 deviation {:.3e}, max weighted-sum deviation {:.3e}",
                report.steps, report.agents, report.max_phi2_dev, report.max_weighted_dev
            );
            println!(
                "collaborative invariant: {} audited steps, {} skipped, {} violations",
                report.audited_steps,
                report.skipped_steps,
                report.theorem1_violations.len()
            );
            if !report.round_trip_ok() {
                return Err(CliError::Runtime(
                    "logged values do not reproduce within 1e-9".to_string(),
                ));
            }
            if !report.theorem1_violations.is_empty() {
                return Err(CliError::Runtime(format!(
                    "weighted phi2 sum exceeded tolerance at steps {:?}",
                    report.theorem1_violations
                )));
            }
            Ok(())
        }
        Command::Sweep { config, weights, agent } => {
            let scenario = parse_config(&config)?;
            let rows = run_sweep(&scenario, agent, &weights)?;
            print!("{}", format_table(&rows, agent));
            Ok(())
        }
        Command::Check => run_checks(),
    }
}
