//! Command-line front end: `run`, `trace`, `sweep` and `validate`.
//!
//! Exit codes: 0 success, 1 validation failure or runtime error, 2 usage error.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use crate::engine;
use crate::error::{JumpGaError, Result};

use super::config::Settings;
use super::presets::{write_trace_csv, write_trajectories_csv, Experiment, ExperimentPreset};
use super::validate::run_validation;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "jumpga",
    version,
    about = "(mu+1) GA on Jump_k with distance-based crossover parent selection"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Single run; writes the result as JSON.
    Run {
        #[command(flatten)]
        params: Params,
        /// Also write the sampled trajectory as CSV.
        #[arg(long)]
        trace_out: Option<PathBuf>,
    },
    /// Single run; writes the sampled (d, m) trajectory as CSV.
    Trace {
        #[command(flatten)]
        params: Params,
    },
    /// Grid of configurations with replicates; writes a result table as CSV.
    Sweep {
        #[command(flatten)]
        params: Params,
        /// Start from a named preset: selection-comparison, plateau-escape, hill-climb.
        #[arg(long)]
        preset: Option<String>,
        /// Where to write recorded trajectories.
        #[arg(long)]
        trajectories_out: Option<PathBuf>,
    },
    /// Oracle suite; writes a pass/fail table as CSV.
    Validate {
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Flags shared by the GA subcommands. Sweep accepts comma lists for
/// n, k, mu, pc, selector and init.
#[derive(Args, Debug)]
struct Params {
    /// key=value settings file; flags take precedence over it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    k: Option<String>,
    #[arg(long)]
    mu: Option<String>,
    #[arg(long)]
    pc: Option<String>,
    /// uniform-pair | furthest | tournament:<l> | powerlaw:<beta>
    #[arg(long)]
    selector: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    /// Total evaluation budget, initial population included.
    #[arg(long)]
    budget: Option<String>,
    #[arg(long)]
    replicates: Option<String>,
    /// random | plateau
    #[arg(long)]
    init: Option<String>,
    /// optimum | plateau
    #[arg(long)]
    stop: Option<String>,
    #[arg(long)]
    trace_stride: Option<String>,
    /// Worker threads; JUMPGA_THREADS overrides.
    #[arg(long)]
    parallel: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Params {
    fn flag_settings(&self) -> Result<Settings> {
        let mut s = Settings::new();
        let pairs = [
            ("n", &self.n),
            ("k", &self.k),
            ("mu", &self.mu),
            ("pc", &self.pc),
            ("selector", &self.selector),
            ("seed", &self.seed),
            ("budget", &self.budget),
            ("replicates", &self.replicates),
            ("init", &self.init),
            ("stop", &self.stop),
            ("trace-stride", &self.trace_stride),
            ("parallel", &self.parallel),
        ];
        for (key, value) in pairs {
            if let Some(v) = value {
                s.set(key, v)?;
            }
        }
        Ok(s)
    }

    /// `base` overridden by the config file, then by flags.
    fn settings(&self, base: Settings) -> Result<Settings> {
        let file = match &self.config {
            Some(path) => Settings::load(path)?,
            None => Settings::new(),
        };
        Ok(base.overlay(&file).overlay(&self.flag_settings()?))
    }
}

/// Parses `args` (program name first) and runs the subcommand.
pub fn cli_run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.command) {
        Ok(code) => code,
        Err(
            e @ (JumpGaError::InvalidConfig(_)
            | JumpGaError::Parse(_)
            | JumpGaError::DimensionMismatch { .. }),
        ) => {
            eprintln!("error: {e}");
            eprintln!("run with --help for usage");
            EXIT_USAGE
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_FAILURE
        }
    }
}

fn execute(command: Command) -> Result<i32> {
    let started = Instant::now();
    match command {
        Command::Run { params, trace_out } => {
            let mut settings = params.settings(Settings::new())?;
            if trace_out.is_some() && settings.get("trace-stride").is_none() {
                settings.set("trace-stride", "100")?;
            }
            let config = settings.config()?;
            let result = engine::run(&config)?;
            let json = serde_json::to_string_pretty(&result)?;
            emit(params.out.as_deref(), |w| Ok(writeln!(w, "{json}")?))?;
            if let Some(path) = trace_out {
                write_trace_csv(&result.trajectory, BufWriter::new(File::create(path)?))?;
            }
            sidecar(params.out.as_deref(), "run", 1, started)?;
            Ok(EXIT_OK)
        }
        Command::Trace { params } => {
            let mut settings = params.settings(Settings::new())?;
            if settings.get("trace-stride").is_none() {
                settings.set("trace-stride", "100")?;
            }
            let config = settings.config()?;
            let result = engine::run(&config)?;
            emit(params.out.as_deref(), |w| {
                write_trace_csv(&result.trajectory, w)
            })?;
            sidecar(params.out.as_deref(), "trace", 1, started)?;
            Ok(EXIT_OK)
        }
        Command::Sweep {
            params,
            preset,
            trajectories_out,
        } => {
            let base = match preset {
                Some(name) => ExperimentPreset::by_name(&name)?.settings,
                None => Settings::new(),
            };
            let settings = params.settings(base)?;
            let parallelism = settings.parallelism()?;
            let experiment = Experiment::from_settings(&settings)?;
            let output = experiment.run(parallelism)?;
            emit(params.out.as_deref(), |w| output.table.write_csv(w))?;
            if let Some(path) = trajectories_out {
                write_trajectories_csv(&output.trajectories, BufWriter::new(File::create(path)?))?;
            }
            sidecar(params.out.as_deref(), "sweep", parallelism, started)?;
            Ok(EXIT_OK)
        }
        Command::Validate { trials, seed, out } => {
            let report = run_validation(trials, seed)?;
            emit(out.as_deref(), |w| report.write_csv(w))?;
            sidecar(out.as_deref(), "validate", 1, started)?;
            for row in report.rows.iter().filter(|r| !r.pass) {
                eprintln!(
                    "FAIL {}: observed {} vs {}",
                    row.check, row.observed, row.bound
                );
            }
            Ok(if report.all_pass() {
                EXIT_OK
            } else {
                EXIT_FAILURE
            })
        }
    }
}

fn emit(path: Option<&Path>, write: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    match path {
        Some(p) => {
            let mut w = BufWriter::new(File::create(p)?);
            write(&mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            write(&mut lock)?;
            lock.flush()?;
        }
    }
    Ok(())
}

/// Wall-clock information goes to `<out>.timing.json` so that the primary
/// output stays byte-identical across invocations.
fn sidecar(out: Option<&Path>, command: &str, threads: usize, started: Instant) -> Result<()> {
    let Some(out) = out else {
        return Ok(());
    };
    let mut path = out.as_os_str().to_owned();
    path.push(".timing.json");
    let timing = serde_json::json!({
        "command": command,
        "threads": threads,
        "wall_seconds": started.elapsed().as_secs_f64(),
    });
    std::fs::write(
        PathBuf::from(path),
        serde_json::to_string_pretty(&timing)? + "\n",
    )?;
    Ok(())
}
