use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use dcprox::runner;
use dcprox::EXIT_IO;

/// Interior subgradient and proximal linearized solvers for constrained DC
/// minimization, with runtime certificates for the convergence inequalities.
#[derive(Parser)]
#[command(name = "dcprox", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute a run configuration, writing a trace CSV and a certificate report
    Run {
        /// Path to a flat `key = value` configuration file
        config: PathBuf,
    },
    /// List built-in problem instances, distance kernels, and certificates
    List,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { config } => match runner::run_config_file(&config) {
            Ok(summary) => {
                println!(
                    "termination: {}  iterations: {}  final_f: {:.6e}",
                    summary.termination.name(),
                    summary.iterations,
                    summary.final_f
                );
                for c in &summary.certificates {
                    println!(
                        "certificate {}: min_slack = {:.6e} {}",
                        c.name,
                        c.min_slack,
                        if c.passed { "PASS" } else { "FAIL" }
                    );
                }
                println!(
                    "trace: {}  report: {}",
                    summary.trace_path.display(),
                    summary.report_path.display()
                );
                exit_with(summary.exit_code())
            }
            Err(e) => {
                eprintln!("dcprox: {e}");
                exit_with(e.exit_code())
            }
        },
        Command::List => {
            print!("{}", runner::list_builtins());
            ExitCode::SUCCESS
        }
    }
}

fn exit_with(code: i32) -> ExitCode {
    ExitCode::from(u8::try_from(code).unwrap_or(EXIT_IO as u8))
}
