use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use injstab_cli::report::run_tasks;
use injstab_cli::suite::check_suite;
use injstab_cli::workspace::parse_workspace;

const EXIT_FAILURE: u8 = 1;
const EXIT_INPUT: u8 = 2;

#[derive(Parser)]
#[command(name = "injstab", version, about = "Injective stabilization of additive functors, computed exactly")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the tasks of a JSON workspace
    Run {
        workspace: PathBuf,
        /// write the JSON report here
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// stop at the first task that does not succeed
        #[arg(long)]
        strict: bool,
    },
    /// Run the randomized property battery
    Check {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 25)]
        samples: usize,
        #[arg(long = "max-dim", default_value_t = 4)]
        max_dim: usize,
        /// write the JSON report here
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn write_out(path: &Option<PathBuf>, json: &str) -> Result<(), ExitCode> {
    if let Some(p) = path {
        if let Err(e) = std::fs::write(p, format!("{json}\n")) {
            eprintln!("error: cannot write {}: {e}", p.display());
            return Err(ExitCode::from(EXIT_INPUT));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run {
            workspace,
            out,
            seed,
            strict,
        } => {
            let ws = match parse_workspace(&workspace) {
                Ok(ws) => ws,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(EXIT_INPUT);
                }
            };
            let report = run_tasks(&ws, seed, strict);
            print!("{}", report.to_text());
            if let Err(code) = write_out(&out, &report.to_json()) {
                return code;
            }
            ExitCode::from(report.exit_code(strict) as u8)
        }
        Command::Check {
            seed,
            samples,
            max_dim,
            out,
        } => {
            let report = match check_suite(seed, samples, max_dim) {
                Ok(r) => r,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(EXIT_INPUT);
                }
            };
            print!("{}", report.to_text());
            if let Err(code) = write_out(&out, &report.to_json()) {
                return code;
            }
            if report.all_pass() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_FAILURE)
            }
        }
    }
}
