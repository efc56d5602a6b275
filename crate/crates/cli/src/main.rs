//! `intertwine`: runs partner-potential scenarios and checks every identity they claim.

mod builtins;
mod config;
mod error;
mod output;
mod scenario;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use log::info;

use crate::config::ScenarioConfig;
use crate::error::{CliError, Exit};

const THREADS_VAR: &str = "INTERTWINE_THREADS";

#[derive(Parser)]
#[command(name = "intertwine", version, about = "Intertwined partner potentials, verified numerically")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario from a JSON config file.
    Run {
        config: PathBuf,
        /// Output directory; overrides the config's `output` key.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the built-in scenarios.
    List,
    /// Run a built-in scenario and report pass or fail.
    Verify {
        name: String,
        /// Also write the report, field CSVs and plot script here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a built-in scenario's config and its run artifacts to a directory.
    Export {
        name: String,
        #[arg(long)]
        out: PathBuf,
    },
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var(THREADS_VAR) else { return Ok(()) };
    let threads: usize = match raw.trim().parse() {
        Ok(n) if n >= 1 => n,
        _ => return Err(CliError::Usage(format!("{THREADS_VAR} must be a positive integer, got `{raw}`"))),
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Usage(format!("{THREADS_VAR}: {e}")))
}

fn print_summary(report: &intertwine::verify::VerificationReport) {
    for e in &report.residuals {
        let verdict = if e.pass { "PASS" } else { "FAIL" };
        println!("{verdict}  {:<48} {:.3e}  (tolerance {:.1e})", e.name, e.value, e.tolerance);
    }
    for c in &report.convergence {
        let verdict = if c.pass { "PASS" } else { "FAIL" };
        println!("{verdict}  {:<48} order {:.3}  (declared {})", c.levels, c.observed_order, c.declared_order);
    }
    for f in &report.flags {
        println!("note  {f}");
    }
    println!("{}: {}", report.scenario, if report.pass { "PASS" } else { "FAIL" });
}

/// Runs a parsed config, writing artifacts to `out` when given.
fn execute(cfg: &ScenarioConfig, out: Option<&Path>) -> Result<Exit, CliError> {
    let outcome = scenario::run(cfg)?;
    if let Some(dir) = out {
        let stride = cfg.time.record_every as usize;
        for path in output::write_outcome(dir, &cfg.scenario, &outcome, stride)? {
            info!("wrote {}", path.display());
        }
    }
    print_summary(&outcome.report);
    Ok(if outcome.report.pass { Exit::Pass } else { Exit::CheckFailed })
}

fn read_config(path: &Path) -> Result<ScenarioConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Read { path: path.display().to_string(), source })?;
    config::parse(&text).map_err(|e| match e {
        CliError::Parse { line, column, key, message } => {
            CliError::Parse { line, column, key, message: format!("{message} (in {})", path.display()) }
        }
        other => other,
    })
}

fn dispatch(cli: Cli) -> Result<Exit, CliError> {
    configure_threads()?;
    match cli.command {
        Command::List => {
            for b in builtins::BUILTINS {
                println!("{:<46} {}", b.label(), b.summary);
            }
            Ok(Exit::Pass)
        }
        Command::Run { config, out } => {
            let cfg = read_config(&config)?;
            let dir = out.or_else(|| cfg.output.as_ref().map(PathBuf::from)).unwrap_or_else(|| PathBuf::from(&cfg.scenario));
            execute(&cfg, Some(&dir))
        }
        Command::Verify { name, out } => execute(&builtins::find(&name)?.config()?, out.as_deref()),
        Command::Export { name, out } => {
            let b = builtins::find(&name)?;
            let cfg = b.config()?;
            std::fs::create_dir_all(&out).map_err(|source| CliError::Write { path: out.display().to_string(), source })?;
            let path = out.join(format!("{}.json", b.name));
            std::fs::write(&path, b.text()).map_err(|source| CliError::Write { path: path.display().to_string(), source })?;
            info!("wrote {}", path.display());
            execute(&cfg, Some(&out))
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let exit = dispatch(cli).unwrap_or_else(|e| {
        eprintln!("error: {e}");
        e.exit()
    });
    ExitCode::from(exit as u8)
}
