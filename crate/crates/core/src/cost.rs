//! Query accounting under the `T_X` / `T_Y` cost model, and the plain Grover
//! baseline that only queries `f_Y`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::instance::ClassCounts;
use crate::schedule::Schedule;

/// Abstract per-query costs of the two predicates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostModel {
    pub t_x: f64,
    pub t_y: f64,
}

impl CostModel {
    pub fn new(t_x: f64, t_y: f64) -> Result<Self, Error> {
        for (name, value) in [("t_x", t_x), ("t_y", t_y)] {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidCost { name, value });
            }
        }
        Ok(CostModel { t_x, t_y })
    }
}

/// Oracle calls of a single run, and how many runs were made.
///
/// `count_x` / `count_y` are per run; totals are `repetitions` times larger.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QueryStats {
    pub count_x: u64,
    pub count_y: u64,
    pub repetitions: u64,
}

impl Default for QueryStats {
    fn default() -> Self {
        QueryStats {
            count_x: 0,
            count_y: 0,
            repetitions: 1,
        }
    }
}

impl QueryStats {
    /// What one pass through `sched` issues: `3L` calls to `O_X`, one to `O_Y`.
    pub fn for_schedule(sched: &Schedule) -> Self {
        QueryStats {
            count_x: 3 * sched.l,
            count_y: 1,
            repetitions: 1,
        }
    }

    pub fn with_repetitions(self, repetitions: u64) -> Self {
        QueryStats {
            repetitions,
            ..self
        }
    }

    pub fn total_x(&self) -> u64 {
        self.count_x * self.repetitions
    }

    pub fn total_y(&self) -> u64 {
        self.count_y * self.repetitions
    }
}

pub fn query_cost(stats: &QueryStats, model: &CostModel) -> f64 {
    stats.repetitions as f64 * (stats.count_x as f64 * model.t_x + stats.count_y as f64 * model.t_y)
}

/// Plain Grover on `f_Y` alone.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NaiveCost {
    pub iterations: u64,
    pub cost: f64,
}

/// `floor(π/4 · √(n/|Y|))` iterations, each one `f_Y` query.
pub fn naive_grover_cost(counts: &ClassCounts, model: &CostModel) -> NaiveCost {
    let iterations = (PI / 4.0 * (counts.n() as f64 / counts.k11 as f64).sqrt()).floor() as u64;
    NaiveCost {
        iterations,
        cost: iterations as f64 * model.t_y,
    }
}

/// Single-run cost of the two-oracle schedule against the baseline.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostComparison {
    #[serde(rename = "L")]
    pub l: u64,
    pub x_queries: u64,
    pub y_queries: u64,
    pub new_cost: f64,
    pub naive_iterations: u64,
    pub naive_cost: f64,
    /// `new_cost / naive_cost`; `None` when the baseline costs nothing.
    pub ratio: Option<f64>,
    /// The `t_y` at which both costs are equal with `t_x` held fixed;
    /// `None` if no positive `t_y` balances them.
    pub crossover_t_y: Option<f64>,
    /// `true` when the baseline is strictly cheaper.
    pub baseline_wins: bool,
}

pub fn compare_costs(counts: &ClassCounts, sched: &Schedule, model: &CostModel) -> CostComparison {
    let stats = QueryStats::for_schedule(sched);
    let new_cost = query_cost(&stats, model);
    let naive = naive_grover_cost(counts, model);
    // count_x·t_x + t_y = iterations·t_y
    let crossover_t_y = match naive.iterations {
        0 | 1 => None,
        it => Some(stats.count_x as f64 * model.t_x / (it - 1) as f64),
    };
    CostComparison {
        l: sched.l,
        x_queries: stats.count_x,
        y_queries: stats.count_y,
        new_cost,
        naive_iterations: naive.iterations,
        naive_cost: naive.cost,
        ratio: (naive.cost > 0.0).then(|| new_cost / naive.cost),
        crossover_t_y,
        baseline_wins: naive.cost < new_cost,
    }
}
