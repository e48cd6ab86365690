//! JSON result record written by `igrover run`.

use serde::{Deserialize, Serialize};

use crate::cost::{naive_grover_cost, query_cost, CostModel};
use crate::instance::ProblemInstance;
use crate::repeat::RunOutcome;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueryCounts {
    /// `O_X` calls per run.
    pub x_queries: u64,
    /// `O_Y` calls per run.
    pub y_queries: u64,
    pub repetitions: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostSummary {
    pub t_x: f64,
    pub t_y: f64,
    /// Query cost over all repetitions; verification is not included.
    pub total: f64,
    /// One `f_X` and one `f_Y` check per repetition.
    pub verification: f64,
    /// Single run of plain Grover on `f_Y`.
    pub naive_total: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub instance: ProblemInstance,
    #[serde(rename = "L")]
    pub l: u64,
    pub policy: String,
    pub counts: QueryCounts,
    pub cost: CostSummary,
    pub p_success_exact: f64,
    pub measured_index: u64,
    pub verified: bool,
    pub seed: u64,
}

impl ResultRecord {
    pub fn new(inst: &ProblemInstance, outcome: &RunOutcome, model: &CostModel) -> Self {
        let naive = naive_grover_cost(&inst.partition_classes(), model);
        ResultRecord {
            instance: inst.clone(),
            l: outcome.schedule.l,
            policy: outcome.schedule.policy_label().to_string(),
            counts: QueryCounts {
                x_queries: outcome.stats.count_x,
                y_queries: outcome.stats.count_y,
                repetitions: outcome.stats.repetitions,
            },
            cost: CostSummary {
                t_x: model.t_x,
                t_y: model.t_y,
                total: query_cost(&outcome.stats, model),
                verification: outcome.stats.repetitions as f64 * (model.t_x + model.t_y),
                naive_total: naive.cost,
            },
            p_success_exact: outcome.p_success,
            measured_index: outcome.measured_index,
            verified: outcome.verified,
            seed: outcome.seed,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cost::QueryStats;
    use crate::schedule::Schedule;

    #[test]
    fn record_shape() {
        let inst = ProblemInstance::from_sizes(1024, 16, 1).unwrap();
        let outcome = RunOutcome {
            schedule: Schedule::fixed(6),
            measured_index: 0,
            verified: true,
            stats: QueryStats::for_schedule(&Schedule::fixed(6)).with_repetitions(2),
            p_success: 0.5,
            seed: 7,
        };
        let rec = ResultRecord::new(&inst, &outcome, &CostModel::new(1.0, 100.0).unwrap());
        let v = serde_json::to_value(&rec).unwrap();
        assert_eq!(v["L"], 6);
        assert_eq!(v["policy"], "fixed");
        assert_eq!(v["counts"]["x_queries"], 18);
        assert_eq!(v["counts"]["repetitions"], 2);
        assert_eq!(v["cost"]["total"], 236.0);
        assert_eq!(v["cost"]["verification"], 202.0);
        assert_eq!(v["cost"]["naive_total"], 2500.0);
        assert_eq!(v["instance"]["n"], 1024);
        assert_eq!(v["instance"]["x"]["kind"], "range");
        assert_eq!(v["seed"], 7);
        let back: ResultRecord = serde_json::from_value(v).unwrap();
        assert_eq!(back, rec);
    }
}
