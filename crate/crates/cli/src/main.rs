//! `laurent-lab`: runs experiments from a TOML config and writes CSV or JSON lines.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails, 2 on a
//! configuration or input error.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use laurent_lab::experiments::{self, ExperimentConfig, ExperimentKind, Format};
use laurent_lab::Error;

#[derive(Parser, Debug)]
#[command(name = "laurent-lab", version, about = "Experiments on Laurent operators in weighted sequence spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// Fejér means in the multiplier norm.
    Fejer,
    /// Muckenhoupt characteristic sweep over a weight family.
    Weights,
    /// Boyd index table.
    Boyd,
    /// Run the named invariant checks.
    Verify,
    /// Calibrate Stechkin constants on a fixture family.
    Calibrate,
}

impl Command {
    fn kind(self) -> ExperimentKind {
        match self {
            Command::Fejer => ExperimentKind::Fejer,
            Command::Weights => ExperimentKind::Weights,
            Command::Boyd => ExperimentKind::Boyd,
            Command::Verify => ExperimentKind::Verify,
            Command::Calibrate => ExperimentKind::Calibrate,
        }
    }
}

#[derive(Args, Debug)]
struct Common {
    /// TOML configuration file; built-in defaults when absent.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output file; standard output when absent.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_parser = ["csv", "json"])]
    format: Option<String>,
    #[arg(long, global = true, value_name = "U64")]
    seed: Option<u64>,
    /// Worker threads.
    #[arg(long, global = true, env = "LAURENT_LAB_THREADS", value_name = "N")]
    threads: Option<usize>,
    /// Relative slack of consistency checks.
    #[arg(long, global = true, value_name = "F")]
    tolerance: Option<f64>,
}

fn load(cli: &Cli) -> laurent_lab::Result<ExperimentConfig> {
    let mut cfg = match &cli.common.config {
        Some(path) => ExperimentConfig::from_path(path)?,
        None => ExperimentConfig::default(),
    };
    let kind = cli.command.kind();
    if let Some(k) = cfg.kind {
        if k != kind {
            return Err(Error::Config(format!(
                "config is for '{}' but the subcommand is '{}'",
                k.as_str(),
                kind.as_str()
            )));
        }
    }
    let c = &cli.common;
    if let Some(s) = c.seed {
        cfg.seed = s;
    }
    if let Some(t) = c.tolerance {
        cfg.tolerance = Some(t);
    }
    if let Some(f) = &c.format {
        cfg.format = Some(f.parse()?);
    }
    if let Some(o) = &c.out {
        cfg.output = Some(o.clone());
    }
    cfg.validate()?;
    Ok(cfg)
}

fn is_input_error(e: &Error) -> bool {
    matches!(e, Error::Config(_) | Error::Parse(_) | Error::Domain(_) | Error::Unsupported(_))
}

fn run(cli: &Cli) -> laurent_lab::Result<bool> {
    let cfg = load(cli)?;
    if let Some(n) = cli.common.threads {
        if n == 0 {
            return Err(Error::Config("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Config(e.to_string()))?;
    }
    let outcome = experiments::run(cli.command.kind(), &cfg)?;
    let format = cfg.format.unwrap_or(Format::Csv);
    match &cfg.output {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            outcome.write(&mut w, format)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            outcome.write(&mut w, format)?;
            w.flush()?;
        }
    }
    for f in outcome.report().failures {
        eprintln!("FAIL {f}");
    }
    Ok(outcome.passed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("laurent-lab: {e}");
            ExitCode::from(if is_input_error(&e) { 2 } else { 1 })
        }
    }
}
