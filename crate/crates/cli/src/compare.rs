use std::io::Write;
use std::path::PathBuf;

use anyhow::anyhow;
use clap::Args;
use igrover_core::{compare_costs, ClassCounts, CostComparison};
use serde::Serialize;

use crate::{load_instance, CliError, CommonArgs};

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// Instance file (JSON).
    #[arg(long, required_unless_present = "sizes", conflicts_with = "sizes")]
    instance: Option<PathBuf>,
    /// Class sizes instead of an instance file: `n,|X|,|Y|`.
    #[arg(long, value_delimiter = ',')]
    sizes: Vec<u64>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Debug, Serialize)]
struct CompareReport {
    n: u64,
    x_size: u64,
    y_size: u64,
    policy: &'static str,
    t_x: f64,
    t_y: f64,
    #[serde(flatten)]
    comparison: CostComparison,
}

pub fn cmd_compare(args: &CompareArgs) -> Result<(), CliError> {
    let counts = match &args.instance {
        Some(path) => load_instance(path)?.partition_classes(),
        None => {
            let [n, x, y] = args.sizes[..] else {
                return Err(CliError::invalid(anyhow!(
                    "--sizes takes exactly three values"
                )));
            };
            ClassCounts::from_sizes(n, x, y).map_err(CliError::invalid)?
        }
    };
    let model = args.common.cost_model()?;
    let sched = args.common.schedule(&counts);
    let report = CompareReport {
        n: counts.n(),
        x_size: counts.x_size(),
        y_size: counts.y_size(),
        policy: sched.policy_label(),
        t_x: model.t_x,
        t_y: model.t_y,
        comparison: compare_costs(&counts, &sched, &model),
    };
    let mut out = args.common.output()?;
    serde_json::to_writer_pretty(&mut out, &report).map_err(CliError::invalid)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}
