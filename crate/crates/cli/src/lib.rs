//! Command-line front end: argument parsing, orchestration and report
//! persistence. The binary is a thin wrapper around [`run`].

pub mod presets;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use sha2::{Digest, Sha256};
use slln_core::diagnostics::{
    resolve_budget, run_experiment_with_budget, write_aggregate_csv, write_checkpoint_csv,
};
use slln_core::proof_validators::validate_proof_with_budget;
use slln_core::{full_condition_report, ConvergenceVerdict, Error, ExperimentConfig, Verdict};

pub const EXIT_USAGE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "slln", version, about = "Mixed-sequence strong law laboratory")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate every hypothesis for a configuration.
    CheckConditions(RunArgs),
    /// Monte-Carlo run with convergence verdict and CSV output.
    Simulate(RunArgs),
    /// Numerical checks of the inequalities behind the theorem.
    ValidateProof(RunArgs),
    /// List the bundled scenarios.
    Presets,
    /// Print one bundled scenario as a config file.
    EmitPreset {
        name: String,
        /// Write to this file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub config: PathBuf,
    /// Directory for reports; created if missing.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    pub threads: Option<usize>,
    /// Ceiling on horizon x replicas.
    #[arg(long)]
    pub budget: Option<u64>,
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run_from<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli, stdout, stderr),
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            if e.use_stderr() {
                EXIT_USAGE
            } else {
                // --help and --version
                let _ = write!(stdout, "{}", e.render());
                0
            }
        }
    }
}

pub fn run(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    match dispatch(cli.command, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn dispatch(command: Command, stdout: &mut dyn Write) -> Result<i32, Error> {
    match command {
        Command::CheckConditions(args) => check_conditions(&args, stdout),
        Command::Simulate(args) => simulate(&args, stdout),
        Command::ValidateProof(args) => validate_proof(&args, stdout),
        Command::Presets => {
            for p in presets::all() {
                writeln!(
                    stdout,
                    "{:<26} conditions={:<10} simulate={:<13} {}",
                    p.name,
                    p.expected_conditions.as_str(),
                    p.expected_simulation.as_str(),
                    p.note
                )?;
            }
            Ok(0)
        }
        Command::EmitPreset { name, out } => {
            let preset = presets::find(&name).ok_or_else(|| Error::Config {
                line: None,
                field: None,
                message: format!(
                    "unknown preset `{name}`; known: {}",
                    presets::names().join(", ")
                ),
            })?;
            let text = preset.config.to_toml_string();
            match out {
                Some(path) => fs::write(path, text)?,
                None => stdout.write_all(text.as_bytes())?,
            }
            Ok(0)
        }
    }
}

struct Prepared {
    config: ExperimentConfig,
    budget: u64,
}

fn prepare(args: &RunArgs) -> Result<Prepared, Error> {
    let mut config = ExperimentConfig::load(&args.config)?;
    if let Some(seed) = args.seed {
        config.master_seed = seed;
    }
    config.validate()?;
    if let Some(t) = args.threads {
        if t == 0 {
            return Err(Error::config("--threads", "must be at least 1"));
        }
        // a pool may already exist when called twice in one process
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global();
    }
    let budget = resolve_budget(args.budget, &config)?;
    Ok(Prepared { config, budget })
}

fn config_digest(text: &str) -> String {
    Sha256::digest(text.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Writes `config.toml` and `manifest.txt` into `dir`.
pub fn write_manifest(dir: &Path, command: &str, config: &ExperimentConfig) -> Result<(), Error> {
    let text = config.to_toml_string();
    fs::write(dir.join("config.toml"), &text)?;
    let manifest = format!(
        "artifact=slln {}\ncommand={command}\nconfig_sha256={}\nmaster_seed={}\n",
        env!("CARGO_PKG_VERSION"),
        config_digest(&text),
        config.master_seed
    );
    fs::write(dir.join("manifest.txt"), manifest)?;
    Ok(())
}

fn out_dir(args: &RunArgs) -> Result<Option<&Path>, Error> {
    match &args.out {
        Some(d) => {
            fs::create_dir_all(d)?;
            Ok(Some(d))
        }
        None => Ok(None),
    }
}

fn check_conditions(args: &RunArgs, stdout: &mut dyn Write) -> Result<i32, Error> {
    let Prepared { config, .. } = prepare(args)?;
    let report = full_condition_report(&config)?;
    stdout.write_all(report.to_text().as_bytes())?;
    if let Some(dir) = out_dir(args)? {
        fs::write(dir.join("conditions.txt"), report.to_kv())?;
        write_manifest(dir, "check-conditions", &config)?;
    }
    Ok(match report.overall {
        Verdict::Satisfied => 0,
        Verdict::Violated => 1,
        Verdict::Inconclusive => 2,
    })
}

fn simulate(args: &RunArgs, stdout: &mut dyn Write) -> Result<i32, Error> {
    let Prepared { config, budget } = prepare(args)?;
    let dir = out_dir(args)?
        .ok_or_else(|| Error::config("--out", "simulate needs an output directory"))?;
    let report = run_experiment_with_budget(&config, budget)?;
    let text = report.to_text();
    fs::write(dir.join("summary.txt"), &text)?;
    write_checkpoint_csv(&report, fs::File::create(dir.join("checkpoints.csv"))?)?;
    write_aggregate_csv(&report, fs::File::create(dir.join("aggregate.csv"))?)?;
    write_manifest(dir, "simulate", &config)?;
    stdout.write_all(text.as_bytes())?;
    Ok(match report.verdict {
        ConvergenceVerdict::Converging => 0,
        ConvergenceVerdict::Diverging => 1,
        ConvergenceVerdict::Indeterminate => 2,
    })
}

fn validate_proof(args: &RunArgs, stdout: &mut dyn Write) -> Result<i32, Error> {
    let Prepared { config, budget } = prepare(args)?;
    let report = validate_proof_with_budget(&config, budget)?;
    let text = report.to_text();
    stdout.write_all(text.as_bytes())?;
    if let Some(dir) = out_dir(args)? {
        fs::write(dir.join("proof.txt"), &text)?;
        report.write_csv(fs::File::create(dir.join("proof_replicas.csv"))?)?;
        report.write_aggregate_csv(fs::File::create(dir.join("proof_aggregate.csv"))?)?;
        write_manifest(dir, "validate-proof", &config)?;
    }
    Ok(if report.passed { 0 } else { 1 })
}
