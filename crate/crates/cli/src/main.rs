use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use smfret_cli::{exit_code, run_analyze, run_analyze_alex, run_forster, run_simulate};

/// Batch analysis of time-binned single-molecule FRET and ALEX photon data.
#[derive(Parser)]
#[command(name = "smfret", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the two-channel analysis chain from a config file.
    Analyze {
        #[arg(long)]
        config: PathBuf,
        /// Write outputs here instead of the config's output_dir.
        #[arg(long)]
        output_dir: Option<PathBuf>,
    },
    /// Run the four-channel ALEX analysis chain from a config file.
    AnalyzeAlex {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        output_dir: Option<PathBuf>,
    },
    /// Fit the Förster distance to a CSV of r,E rows.
    Forster {
        /// Points file: one `separation,efficiency` pair per row.
        points: PathBuf,
        /// Write the sampled fitted curve here (default: next to the input).
        #[arg(long)]
        output_dir: Option<PathBuf>,
    },
    /// Generate a seeded synthetic trace plus ground-truth sidecar.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        /// Replace the config's seed.
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result =
        match cli.command {
            Command::Analyze { config, output_dir } => run_analyze(&config, output_dir.as_deref())
                .map(|outcome| {
                    print_analysis(&outcome);
                }),
            Command::AnalyzeAlex { config, output_dir } => {
                run_analyze_alex(&config, output_dir.as_deref()).map(|outcome| {
                    print_analysis(&outcome);
                })
            }
            Command::Forster { points, output_dir } => run_forster(&points, output_dir.as_deref())
                .map(|outcome| {
                    println!("R0 = {:.6}", outcome.fit.r0);
                    println!("residual_sse = {:.6e}", outcome.fit.residual_sse);
                    println!("converged = {}", outcome.fit.converged);
                    println!(
                        "curve ({} points fitted) written to {}",
                        outcome.n_points,
                        outcome.curve_path.display()
                    );
                }),
            Command::Simulate { config, seed } => run_simulate(&config, seed).map(|outcome| {
                println!(
                    "wrote {} ({} bins, {} burst bins)",
                    outcome.trace_path.display(),
                    outcome.n_bins,
                    outcome.burst_bins
                );
                println!("ground truth in {}", outcome.truth_path.display());
            }),
        };

    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err) as u8)
        }
    }
}

fn print_analysis(outcome: &smfret_cli::AnalyzeOutcome) {
    println!(
        "{} bins -> {} bursts ({} skipped)",
        outcome.bins_total, outcome.bursts_selected, outcome.bursts_skipped
    );
    match outcome.fit() {
        Some(fit) => println!(
            "gaussian fit: mean = {:.4}, sigma = {:.4}, converged = {}",
            fit.mean, fit.sigma, fit.converged
        ),
        None => println!("gaussian fit: (none)"),
    }
    for warning in &outcome.warnings {
        println!("warning: {warning}");
    }
    println!("outputs in {}", outcome.output_dir.display());
}
