use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use anyhow::anyhow;
use clap::{Args, ValueEnum};
use igrover_core::full::run_schedule_full;
use igrover_core::{
    measure_until_verified, run_schedule, write_trace_csv, RepetitionError, ResultRecord,
    StateSource, TraceRecord,
};

use crate::{full_cap, load_instance, CliError, CommonArgs};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EngineArg {
    Reduced,
    Full,
    Both,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Instance file (JSON).
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, value_enum, default_value = "reduced")]
    engine: EngineArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Maximum number of runs before giving up.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    reps: u64,
    /// Write the per-operation trace as CSV.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Largest allowed reduced/full disagreement with `--engine both`.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Write the final full state as a binary dump (full engines only).
    #[arg(long)]
    dump_state: Option<PathBuf>,
    #[command(flatten)]
    common: CommonArgs,
}

/// First record pair that differs by more than `tol`.
fn first_disagreement<'a>(
    a: &'a [TraceRecord],
    b: &'a [TraceRecord],
    tol: f64,
) -> Option<(usize, &'a TraceRecord, &'a TraceRecord)> {
    a.iter()
        .zip(b)
        .enumerate()
        .find(|(_, (x, y))| {
            (x.phase, x.step, x.op) != (y.phase, y.step, y.op) || {
                let d = x.point.max_abs_diff(&y.point);
                d.is_nan() || d > tol
            }
        })
        .map(|(i, (x, y))| (i, x, y))
}

pub fn cmd_run(args: &RunArgs) -> Result<(), CliError> {
    let inst = load_instance(&args.instance)?;
    let counts = inst.partition_classes();
    let sched = args.common.schedule(&counts);
    let model = args.common.cost_model()?;

    let reduced = run_schedule(&counts, &sched);
    let full = match args.engine {
        EngineArg::Reduced => None,
        EngineArg::Full | EngineArg::Both => {
            Some(run_schedule_full(&inst, &sched, full_cap()?).map_err(CliError::invalid)?)
        }
    };

    if let (EngineArg::Both, Some(full)) = (args.engine, &full) {
        if reduced.trace.len() != full.trace.len() {
            return Err(CliError::new(
                CliError::DISAGREEMENT,
                anyhow!(
                    "trace lengths differ: {} vs {}",
                    reduced.trace.len(),
                    full.trace.len()
                ),
            ));
        }
        if let Some((i, r, f)) = first_disagreement(&reduced.trace, &full.trace, args.tol) {
            return Err(CliError::new(
                CliError::DISAGREEMENT,
                anyhow!(
                    "engines disagree at record {i} (phase {}, step {}, {}): reduced {:?}, full {:?}",
                    r.phase,
                    r.step,
                    r.op,
                    r.point,
                    f.point
                ),
            ));
        }
    }

    if let Some(path) = &args.trace {
        let trace = match (&full, args.engine) {
            (Some(full), EngineArg::Full) => &full.trace,
            _ => &reduced.trace,
        };
        write_trace_csv(BufWriter::new(File::create(path)?), trace).map_err(CliError::invalid)?;
    }

    if let Some(path) = &args.dump_state {
        let full = full.as_ref().ok_or_else(|| {
            CliError::invalid(anyhow!("--dump-state needs --engine full or both"))
        })?;
        full.state.write_dump(BufWriter::new(File::create(path)?))?;
    }

    let source = match &full {
        Some(full) => StateSource::Full(&full.state),
        None => StateSource::Reduced(reduced.state),
    };
    let (outcome, exhausted) =
        match measure_until_verified(&inst, &sched, source, args.reps, args.seed) {
            Ok(o) => (o, false),
            Err(RepetitionError::Exhausted(o)) => (*o, true),
            Err(RepetitionError::Sim(e)) => return Err(CliError::invalid(e)),
        };

    let record = ResultRecord::new(&inst, &outcome, &model);
    let mut out = args.common.output()?;
    serde_json::to_writer_pretty(&mut out, &record).map_err(CliError::invalid)?;
    writeln!(out)?;
    out.flush()?;

    if exhausted {
        return Err(CliError::new(
            CliError::EXHAUSTED,
            anyhow!(
                "no verified outcome after {} repetitions (single-run success probability {})",
                outcome.stats.repetitions,
                outcome.p_success
            ),
        ));
    }
    Ok(())
}
