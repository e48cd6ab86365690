//! `igrover`: run, sweep and cost-compare the two-oracle Grover schedule.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use igrover_core::{
    choose_l, ClassCounts, CostModel, Policy, ProblemInstance, Schedule, DEFAULT_FULL_CAP,
};

mod compare;
mod run;
mod sweep;

/// Environment variable overriding the full-engine size cap.
const FULL_CAP_ENV: &str = "IGROVER_FULL_CAP";

#[derive(Debug, Parser)]
#[command(
    name = "igrover",
    version,
    about = "Two-oracle Grover search for set intersection"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the schedule on one instance, measure and verify.
    Run(run::RunArgs),
    /// Tabulate success probability and cost over L or over an instance grid.
    Sweep(sweep::SweepArgs),
    /// Compare query cost against plain Grover on f_Y.
    Compare(compare::CompareArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PolicyArg {
    Paper,
    Half,
    Sweep,
}

impl From<PolicyArg> for Policy {
    fn from(p: PolicyArg) -> Self {
        match p {
            PolicyArg::Paper => Policy::PaperFormula,
            PolicyArg::Half => Policy::RoundedHalf,
            PolicyArg::Sweep => Policy::Swept,
        }
    }
}

/// Flags shared by every subcommand.
#[derive(Debug, Args)]
pub struct CommonArgs {
    /// How L is chosen.
    #[arg(long, value_enum, default_value = "paper")]
    policy: PolicyArg,
    /// Use this L instead of the policy.
    #[arg(long = "L", value_name = "INT")]
    l_override: Option<u64>,
    /// Cost of one f_X query.
    #[arg(long = "tx", default_value_t = 1.0)]
    t_x: f64,
    /// Cost of one f_Y query.
    #[arg(long = "ty", default_value_t = 1.0)]
    t_y: f64,
    /// Output file (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
}

impl CommonArgs {
    fn schedule(&self, counts: &ClassCounts) -> Schedule {
        match self.l_override {
            Some(l) => Schedule::fixed(l),
            None => choose_l(counts, self.policy.into()),
        }
    }

    fn cost_model(&self) -> Result<CostModel, CliError> {
        CostModel::new(self.t_x, self.t_y).map_err(CliError::invalid)
    }

    fn output(&self) -> Result<Box<dyn Write>, CliError> {
        open_output(self.out.as_deref())
    }
}

/// An error with the process exit status it maps to.
#[derive(Debug)]
pub struct CliError {
    code: u8,
    source: anyhow::Error,
}

impl CliError {
    pub const INVALID: u8 = 1;
    pub const DISAGREEMENT: u8 = 2;
    pub const EXHAUSTED: u8 = 3;

    pub fn new(code: u8, source: impl Into<anyhow::Error>) -> Self {
        CliError {
            code,
            source: source.into(),
        }
    }

    pub fn invalid(source: impl Into<anyhow::Error>) -> Self {
        CliError::new(Self::INVALID, source)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::invalid(e)
    }
}

pub fn load_instance(path: &Path) -> Result<ProblemInstance, CliError> {
    ProblemInstance::load(path)
        .map_err(|e| CliError::invalid(anyhow::anyhow!("{}: {e}", path.display())))
}

pub fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| {
            CliError::invalid(
                anyhow::Error::new(e).context(format!("cannot create {}", p.display())),
            )
        })?)),
        None => Box::new(io::stdout().lock()),
    })
}

pub fn full_cap() -> Result<u64, CliError> {
    match std::env::var(FULL_CAP_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|e| CliError::invalid(anyhow::anyhow!("{FULL_CAP_ENV}={v:?}: {e}"))),
        Err(_) => Ok(DEFAULT_FULL_CAP),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // Exit 2 is reserved for engine disagreement.
            return if e.use_stderr() {
                ExitCode::from(CliError::INVALID)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Run(args) => run::cmd_run(&args),
        Command::Sweep(args) => sweep::cmd_sweep(&args),
        Command::Compare(args) => compare::cmd_compare(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {:#}", e.source);
            ExitCode::from(e.code)
        }
    }
}
