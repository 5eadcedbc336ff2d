//! Command-line front end.

use std::ffi::OsString;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use log::{error, info, warn};

use crate::error::{Error, Result};
use crate::overrides::{self, Override};
use crate::persist::persist;
use crate::presets;
use crate::runner::{run_experiment, Selection};
use crate::spec::ExperimentSpec;

#[derive(Debug, Parser)]
#[command(name = "qzd", version, about = "Quantum Zeno teleportation simulator")]
pub struct Cli {
    /// Only log warnings and errors.
    #[arg(long, short, global = true)]
    pub quiet: bool,

    /// Worker threads (default: all cores).
    #[arg(long, short, global = true, default_value_t = 0)]
    pub jobs: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// One measured run: the first particle and first N of the spec.
    Run(SourceArgs),
    /// Every N (or interval) of the spec, without snapshots or control runs.
    Sweep(SourceArgs),
    /// A complete figure preset.
    Figure {
        /// fig2, fig3, fig4, fig5b, fig5c, fig5d (append `-extended` to add pion and proton).
        name: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Fast numerical self-test.
    Check,
}

#[derive(Debug, Args)]
pub struct SourceArgs {
    /// Spec file (TOML).
    #[arg(conflicts_with = "preset", required_unless_present = "preset")]
    pub spec: Option<PathBuf>,

    /// Built-in spec instead of a file.
    #[arg(long)]
    pub preset: Option<String>,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output root; the experiment is written to <OUT>/<name>.
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Override a spec field, e.g. `measurement.max_substep=0.025` or `n_measurements=0`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
}

fn load(source: &SourceArgs) -> Result<ExperimentSpec> {
    match (&source.spec, &source.preset) {
        (Some(path), _) => ExperimentSpec::load(path),
        (None, Some(name)) => presets::preset(name),
        (None, None) => Err(Error::Spec("give a spec file or --preset".into())),
    }
}

fn finish(spec: ExperimentSpec, output: &OutputArgs, selection: Selection, jobs: usize) -> Result<()> {
    let parsed = output
        .overrides
        .iter()
        .map(|s| s.parse::<Override>())
        .collect::<Result<Vec<_>>>()?;
    let spec = overrides::apply(&spec, &parsed)?;
    let root = output.out.clone().unwrap_or_else(|| spec.output_dir.clone());
    let result = run_experiment(&spec, selection, jobs)?;
    let dir = persist(&result, &root)?;
    for run in &result.runs {
        let mut line = format!("{}: P = {:.6}", run.job.id, run.record.final_survival());
        if let Some(c) = &run.continuity {
            line += &format!(", max continuity residual = {:.3e}", c.max_abs_residual());
        }
        if let Some(m) = &run.measured {
            line += &format!(", T_measured = {:.4}", m.time);
        }
        info!("{line}");
    }
    info!("wrote {}", dir.display());
    Ok(())
}

pub fn execute(cli: &Cli) -> Result<bool> {
    match &cli.command {
        Command::Run(src) => finish(load(src)?, &src.output, Selection::Single, cli.jobs).map(|_| true),
        Command::Sweep(src) => finish(load(src)?, &src.output, Selection::Sweep, cli.jobs).map(|_| true),
        Command::Figure { name, output } => {
            finish(presets::preset(name)?, output, Selection::Full, cli.jobs).map(|_| true)
        }
        Command::Check => {
            let results = crate::check::run_checks()?;
            for r in &results {
                println!(
                    "{} {:<28} {:.3e} (tolerance {:.0e})",
                    if r.passed { "PASS" } else { "FAIL" },
                    r.name,
                    r.value,
                    r.tolerance
                );
            }
            Ok(results.iter().all(|r| r.passed))
        }
    }
}

fn init_logging(quiet: bool) {
    let level = if quiet { "warn" } else { "info" };
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .format_timestamp(None)
        .try_init();
}

pub fn main<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    init_logging(cli.quiet);
    match execute(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            warn!("self-test failed");
            ExitCode::from(1)
        }
        Err(e) => {
            error!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}
