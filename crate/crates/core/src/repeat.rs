//! Measure, verify classically, and restart on failure.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cost::QueryStats;
use crate::error::Error;
use crate::full::{project_to_reduced, run_schedule_full_untraced, FullState, MeasurementSampler};
use crate::instance::{Class, ProblemInstance};
use crate::reduced::{final_point, ReducedState};
use crate::schedule::Schedule;

/// Tries per draw before rejection sampling falls back to a linear scan.
const REJECTION_TRIES: u32 = 64;

/// Where measurement outcomes are drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sampling {
    /// Pick a class with probability `x²`, `y²`, `z²`, then a uniform member.
    /// Works for any `n`.
    Reduced,
    /// Draw from `d_i²` over the full state vector, up to `cap` amplitudes.
    Full { cap: u64 },
}

/// Samples an index from the reduced state. Valid because amplitudes are
/// equal within each class.
#[derive(Debug, Clone)]
pub struct ReducedSampler<'a> {
    inst: &'a ProblemInstance,
    weights: [f64; 3],
}

impl<'a> ReducedSampler<'a> {
    pub fn new(inst: &'a ProblemInstance, point: &ReducedState) -> Self {
        let counts = inst.partition_classes();
        let w = |c: f64, k: u64| if k == 0 { 0.0 } else { c * c };
        ReducedSampler {
            inst,
            weights: [
                w(point.x, counts.k00),
                w(point.y, counts.k10),
                w(point.z, counts.k11),
            ],
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        let total: f64 = self.weights.iter().sum();
        let mut u = rng.gen::<f64>() * total;
        let mut class = Class::K11;
        for c in Class::ALL {
            let w = self.weights[c as usize];
            if w > 0.0 && u < w {
                class = c;
                break;
            }
            u -= w;
        }
        self.uniform_member(class, rng)
    }

    fn uniform_member<R: Rng + ?Sized>(&self, class: Class, rng: &mut R) -> u64 {
        let inst = self.inst;
        let n = inst.n();
        let size = inst.partition_classes().get(class);
        let x_size = inst.x_spec().count(n);
        match class {
            Class::K11 => inst
                .y_spec()
                .nth(n, rng.gen_range(0..size))
                .expect("k < |Y|"),
            Class::K10 => {
                for _ in 0..REJECTION_TRIES {
                    let i = inst
                        .x_spec()
                        .nth(n, rng.gen_range(0..x_size))
                        .expect("k < |X|");
                    if !inst.f_y(i) {
                        return i;
                    }
                }
                self.scan(class, size, rng)
            }
            Class::K00 => {
                for _ in 0..REJECTION_TRIES {
                    let i = rng.gen_range(0..n);
                    if !inst.f_x(i) {
                        return i;
                    }
                }
                self.scan(class, size, rng)
            }
        }
    }

    fn scan<R: Rng + ?Sized>(&self, class: Class, size: u64, rng: &mut R) -> u64 {
        self.inst
            .nth_in_class(class, rng.gen_range(0..size))
            .expect("k < class size")
    }
}

/// Result of a measure-and-verify loop.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub schedule: Schedule,
    /// Last measured index.
    pub measured_index: u64,
    pub verified: bool,
    /// Per-run oracle calls; `repetitions` is the number of runs made.
    pub stats: QueryStats,
    /// Exact single-run success probability `z²` of the final state.
    pub p_success: f64,
    pub seed: u64,
}

#[derive(Debug, thiserror::Error)]
pub enum RepetitionError {
    #[error("no verified outcome after {} repetitions", .0.stats.repetitions)]
    Exhausted(Box<RunOutcome>),
    #[error(transparent)]
    Sim(#[from] Error),
}

/// The prepared final state that measurements are drawn from.
#[derive(Debug, Clone, Copy)]
pub enum StateSource<'a> {
    Reduced(ReducedState),
    Full(&'a FullState),
}

/// Runs the schedule, measures, checks the outcome with one `f_X` and one
/// `f_Y` evaluation, and restarts from phase 0 on failure, up to `max_reps`
/// runs in total. Randomness comes from a single generator seeded by `seed`.
pub fn run_with_repetitions(
    inst: &ProblemInstance,
    sched: &Schedule,
    max_reps: u64,
    seed: u64,
    sampling: Sampling,
) -> Result<RunOutcome, RepetitionError> {
    match sampling {
        Sampling::Reduced => {
            let point = final_point(&inst.partition_classes(), sched.l);
            measure_until_verified(inst, sched, StateSource::Reduced(point), max_reps, seed)
        }
        Sampling::Full { cap } => {
            let run = run_schedule_full_untraced(inst, sched, cap)?;
            measure_until_verified(inst, sched, StateSource::Full(&run.state), max_reps, seed)
        }
    }
}

type Draw<'a> = Box<dyn FnMut(&mut ChaCha8Rng) -> u64 + 'a>;

/// Measure-and-verify loop over an already prepared final state.
///
/// Every restart prepares the same state, so only the measurement is redrawn;
/// the query count still reflects every run.
pub fn measure_until_verified(
    inst: &ProblemInstance,
    sched: &Schedule,
    source: StateSource<'_>,
    max_reps: u64,
    seed: u64,
) -> Result<RunOutcome, RepetitionError> {
    assert!(max_reps >= 1, "max_reps must be positive");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (p_success, mut draw): (f64, Draw<'_>) = match source {
        StateSource::Reduced(point) => {
            let sampler = ReducedSampler::new(inst, &point);
            (point.z * point.z, Box::new(move |rng| sampler.sample(rng)))
        }
        StateSource::Full(state) => {
            let p = project_to_reduced(state, inst)?.z.powi(2);
            let sampler = MeasurementSampler::new(state);
            (p, Box::new(move |rng| sampler.sample(rng) as u64))
        }
    };

    let mut outcome = RunOutcome {
        schedule: *sched,
        measured_index: 0,
        verified: false,
        stats: QueryStats::for_schedule(sched),
        p_success,
        seed,
    };
    for rep in 1..=max_reps {
        let i = draw(&mut rng);
        outcome.measured_index = i;
        outcome.stats.repetitions = rep;
        if inst.verify_outcome(i).map_err(Error::from)? {
            outcome.verified = true;
            return Ok(outcome);
        }
    }
    Err(RepetitionError::Exhausted(Box::new(outcome)))
}
