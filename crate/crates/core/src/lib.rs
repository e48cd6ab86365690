//! Simulation of a two-oracle Grover search for an element of `X ∩ Y` when
//! `Y ⊆ X` and `f_Y` is much more expensive to evaluate than `f_X`.
//!
//! The algorithm prepares the uniform superposition, runs `L` steps of
//! `(O_X, D)`, one step of `(O_Y, D)` and `2L` more steps of `(O_X, D)`, then
//! measures. It makes `3L` queries to `f_X` and a single query to `f_Y`.
//!
//! Two engines run the schedule:
//!
//! - [`reduced`] tracks the three weighted class amplitudes `(x, y, z)`, a
//!   point on the unit sphere, in O(1) memory.
//! - [`full`] evolves all `n` amplitudes and serves as the brute-force check
//!   on the reduced engine.
//!
//! [`schedule`] picks `L`, [`cost`] weighs queries by `T_X` and `T_Y` and
//! compares against plain Grover on `f_Y`, and [`repeat`] measures, verifies
//! and restarts.
//!
//! ```
//! use igrover_core::{choose_l, run_schedule, ClassCounts, Policy};
//!
//! let counts = ClassCounts::from_sizes(1024, 16, 1).unwrap();
//! let sched = choose_l(&counts, Policy::PaperFormula);
//! assert_eq!(sched.l, 6);
//! let run = run_schedule(&counts, &sched);
//! assert_eq!((run.stats.count_x, run.stats.count_y), (18, 1));
//! assert!(run.p_success() > 0.4);
//! ```

pub mod cost;
pub mod engine;
pub mod error;
pub mod full;
pub mod instance;
pub mod reduced;
pub mod repeat;
pub mod report;
pub mod schedule;
pub mod trace;

pub use cost::{
    compare_costs, naive_grover_cost, query_cost, CostComparison, CostModel, NaiveCost, QueryStats,
};
pub use engine::{trace_len, Engine};
pub use error::{Error, InstanceError};
pub use full::{
    project_to_reduced, run_schedule_full, sample_measurement, FullSimulator, FullState, Oracle,
    DEFAULT_FULL_CAP,
};
pub use instance::{Class, ClassCounts, InstanceFileError, MembershipSpec, ProblemInstance};
pub use reduced::{
    apply_diffusion, apply_oracle_x, apply_oracle_y, initial_point, phase1_plane_residual,
    phase1_rotation_check, run_schedule, success_probability, ReducedSimulator, ReducedState,
    SpherePoint,
};
pub use repeat::{
    measure_until_verified, run_with_repetitions, RepetitionError, RunOutcome, Sampling,
    StateSource,
};
pub use report::ResultRecord;
pub use schedule::{choose_l, compute_theta, sweep_l, AngleParams, Policy, Schedule, Sweep};
pub use trace::{read_trace_csv, write_trace_csv, Op, TraceRecord};
