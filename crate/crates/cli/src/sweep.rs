use std::io::Write;
use std::path::PathBuf;

use anyhow::anyhow;
use clap::Args;
use igrover_core::reduced::final_point;
use igrover_core::schedule::DEFAULT_SWEEP_WINDOW;
use igrover_core::{
    query_cost, success_probability, sweep_l, ClassCounts, CostModel, QueryStats, Schedule,
};
use rayon::prelude::*;

use crate::{load_instance, CliError, CommonArgs};

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Sweep L around the formula value for this instance.
    #[arg(long, conflicts_with_all = ["n_values", "x_sizes", "y_sizes"])]
    instance: Option<PathBuf>,
    /// Half-width of the L window (instance mode).
    #[arg(long, default_value_t = DEFAULT_SWEEP_WINDOW)]
    window: u64,
    /// Grid mode: search-space sizes.
    #[arg(long = "n", value_delimiter = ',', requires_all = ["x_sizes", "y_sizes"])]
    n_values: Vec<u64>,
    /// Grid mode: sizes of X.
    #[arg(long = "x-sizes", value_delimiter = ',')]
    x_sizes: Vec<u64>,
    /// Grid mode: sizes of Y.
    #[arg(long = "y-sizes", value_delimiter = ',')]
    y_sizes: Vec<u64>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Debug, Clone, PartialEq)]
struct Row {
    counts: ClassCounts,
    l: u64,
    p_success: f64,
    cost: f64,
}

fn row(counts: ClassCounts, sched: Schedule, p_success: f64, model: &CostModel) -> Row {
    Row {
        counts,
        l: sched.l,
        p_success,
        cost: query_cost(&QueryStats::for_schedule(&sched), model),
    }
}

fn write_rows(out: &mut dyn Write, rows: &[Row]) -> std::io::Result<()> {
    writeln!(out, "n,x_size,y_size,L,p_success,cost")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            r.counts.n(),
            r.counts.x_size(),
            r.counts.y_size(),
            r.l,
            r.p_success,
            r.cost
        )?;
    }
    out.flush()
}

pub fn cmd_sweep(args: &SweepArgs) -> Result<(), CliError> {
    let model = args.common.cost_model()?;
    let rows = match &args.instance {
        Some(path) => {
            let counts = load_instance(path)?.partition_classes();
            sweep_l(&counts, args.window)
                .table
                .into_iter()
                .map(|(l, p)| row(counts, Schedule::fixed(l), p, &model))
                .collect()
        }
        None => grid_rows(args, &model)?,
    };
    let mut out = args.common.output()?;
    write_rows(&mut out, &rows)?;
    Ok(())
}

fn grid_rows(args: &SweepArgs, model: &CostModel) -> Result<Vec<Row>, CliError> {
    if args.n_values.is_empty() {
        return Err(CliError::invalid(anyhow!(
            "give either --instance or a grid (--n, --x-sizes, --y-sizes)"
        )));
    }
    let mut cells = Vec::new();
    for &n in &args.n_values {
        for &x in &args.x_sizes {
            for &y in &args.y_sizes {
                let counts = ClassCounts::from_sizes(n, x, y).map_err(|e| {
                    CliError::invalid(anyhow!("grid cell n={n}, |X|={x}, |Y|={y}: {e}"))
                })?;
                cells.push(counts);
            }
        }
    }
    cells.sort_by_key(|c| (c.n(), c.x_size(), c.y_size()));
    cells.dedup();
    Ok(cells
        .par_iter()
        .map(|&counts| {
            let sched = args.common.schedule(&counts);
            let p = success_probability(&final_point(&counts, sched.l));
            row(counts, sched, p, model)
        })
        .collect())
}
