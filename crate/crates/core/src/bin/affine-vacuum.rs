use std::path::PathBuf;
use std::process::ExitCode;

use affine_vacuum::harness::{check_ops, load_configs, output_dir, run_scenario, sweep, ScenarioConfig};
use affine_vacuum::Error;
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(version, about = "Perturbations of expanding affine gas motions")]
struct Cli {
    /// Output directory (overrides the `out` key of a config).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario config.
    Run { config: PathBuf },
    /// Run every `*.json` config of a directory in parallel.
    Sweep {
        config_dir: PathBuf,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Check the discrete operator identities up to index `order`.
    CheckOps {
        #[arg(long, default_value_t = 2)]
        order: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn fail(e: Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(if matches!(e, Error::ConfigInvalid(_)) { 2 } else { 1 })
}

fn report(passed: bool, failed: &[String], dir: &std::path::Path) -> ExitCode {
    if passed {
        println!("ok: outputs in {}", dir.display());
        ExitCode::SUCCESS
    } else {
        for f in failed {
            eprintln!("failed: {f}");
        }
        ExitCode::from(1)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { config } => {
            let cfg = match ScenarioConfig::from_file(&config) {
                Ok(c) => c,
                Err(e) => return fail(e),
            };
            let dir = output_dir(&cfg, cli.out.as_deref());
            match run_scenario(&cfg, Some(&dir)) {
                Ok(s) => {
                    let failed: Vec<String> = s
                        .checks
                        .iter()
                        .filter(|c| !c.passed)
                        .map(|c| format!("{} = {:e}", c.name, c.value))
                        .chain(s.error.clone())
                        .collect();
                    report(s.passed, &failed, &dir)
                }
                Err(e) => fail(e),
            }
        }
        Command::Sweep { config_dir, jobs } => {
            let configs = match load_configs(&config_dir) {
                Ok(c) => c,
                Err(e) => return fail(e),
            };
            let dir = cli.out.unwrap_or_else(|| PathBuf::from("out").join("sweep"));
            match sweep(&configs, jobs, Some(&dir)) {
                Ok(r) => {
                    println!("{} rows, max C_* = {:e}", r.rows.len(), r.c_star_max);
                    report(r.exit_code() == 0, &r.failed, &dir)
                }
                Err(e) => fail(e),
            }
        }
        Command::CheckOps { order, seed } => {
            let dir = cli.out.unwrap_or_else(|| PathBuf::from("out").join("check-ops"));
            match check_ops(order, seed, Some(&dir)) {
                Ok(s) => {
                    let failed: Vec<String> = s.checks.iter().filter(|c| !c.passed).map(|c| c.name.clone()).collect();
                    report(s.passed, &failed, &dir)
                }
                Err(e) => fail(e),
            }
        }
    }
}
