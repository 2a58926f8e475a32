use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::Value;
use wickbench::config::SuiteConfig;
use wickbench::suite::{self, failures};
use wickbench::{BenchError, CheckArgs, CheckKind, Tolerances};

/// Verification harness for Gaussian Wick calculus inequalities.
#[derive(Debug, Parser)]
#[command(name = "wickbench", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a suite configuration and write report.json / report.csv.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the config seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory (default: the config's `output`, else `.`).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Uniform tolerance for exact, quadrature, PSD and coefficient rows.
        #[arg(long)]
        tol: Option<f64>,
        /// Worker threads (default: all cores).
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Evaluate one check on inline JSON parameters and print the rows.
    Check {
        name: String,
        #[arg(long)]
        params: String,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// List the available checks.
    ListChecks,
}

fn override_tol(tol: &mut Tolerances, t: Option<f64>) -> Result<(), BenchError> {
    if let Some(t) = t {
        if t.is_nan() || t < 0.0 {
            return Err(BenchError::Config(format!("--tol must be nonnegative, got {t}")));
        }
        tol.exact = t;
        tol.quadrature = t;
        tol.psd = t;
        tol.coefficient = t;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool, BenchError> {
    match cli.command {
        Command::Run {
            config,
            seed,
            out,
            tol,
            jobs,
        } => {
            let mut cfg = SuiteConfig::load(&config)?;
            if let Some(s) = seed {
                cfg.seed = s;
            }
            override_tol(&mut cfg.tolerances, tol)?;
            if jobs == Some(0) {
                return Err(BenchError::Config("--jobs must be at least 1".into()));
            }
            let dir = out.or_else(|| cfg.output.clone()).unwrap_or_else(|| PathBuf::from("."));
            let rows = suite::run_suite(&cfg, jobs)?;
            let (json_path, csv_path) = suite::write_reports(&rows, &dir)?;
            let failed = failures(&rows);
            println!(
                "{} rows, {} failed; wrote {} and {}",
                rows.len(),
                failed,
                json_path.display(),
                csv_path.display()
            );
            Ok(failed == 0)
        }
        Command::Check { name, params, tol } => {
            let kind: CheckKind = name.parse()?;
            let value: Value =
                serde_json::from_str(&params).map_err(|e| BenchError::Config(format!("--params: {e}")))?;
            let mut tolerances = Tolerances::default();
            override_tol(&mut tolerances, tol)?;
            let rows = CheckArgs::parse(kind, value)?.run(&tolerances)?;
            println!("{}", serde_json::to_string_pretty(&rows)?);
            Ok(failures(&rows) == 0)
        }
        Command::ListChecks => {
            for kind in CheckKind::ALL {
                println!("{:<22} {}", kind.name(), kind.description());
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
