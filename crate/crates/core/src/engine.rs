//! The phase schedule, shared by both simulators.
//!
//! Phase 0 prepares the uniform superposition. Phase 1 applies `L` steps of
//! `(O_X, D)`, phase 2 a single `(O_Y, D)` step and phase 3 `2L` steps of
//! `(O_X, D)`. A trace record is taken after every operation.

use crate::cost::QueryStats;
use crate::error::Error;
use crate::reduced::ReducedState;
use crate::trace::{Op, TraceRecord};

/// A state representation the schedule can drive.
pub trait Engine {
    /// Phase 0: uniform superposition, counters cleared.
    fn reset(&mut self);
    fn oracle_x(&mut self);
    fn oracle_y(&mut self);
    fn diffusion(&mut self);
    /// The current state as a point on the unit sphere.
    fn point(&self) -> Result<ReducedState, Error>;
    fn stats(&self) -> QueryStats;
}

/// Number of trace records a schedule with `l` phase-1 steps produces.
pub fn trace_len(l: u64) -> u64 {
    1 + 2 * (3 * l + 1)
}

/// Runs the full schedule on `engine`. With `record == false` only the final
/// state is kept and the trace comes back empty.
pub fn execute<E: Engine>(engine: &mut E, l: u64, record: bool) -> Result<Vec<TraceRecord>, Error> {
    let mut trace = Vec::new();
    if record {
        trace.reserve(trace_len(l) as usize);
    }
    let mut snap = |engine: &E, phase: u8, step: u64, op: Op| -> Result<(), Error> {
        if record {
            trace.push(TraceRecord::new(phase, step, op, engine.point()?));
        }
        Ok(())
    };

    engine.reset();
    snap(engine, 0, 0, Op::Init)?;
    let phases: [(u8, u64, Op); 3] = [
        (1, l, Op::OracleX),
        (2, 1, Op::OracleY),
        (3, 2 * l, Op::OracleX),
    ];
    for (phase, steps, oracle) in phases {
        for step in 0..steps {
            match oracle {
                Op::OracleY => engine.oracle_y(),
                _ => engine.oracle_x(),
            }
            snap(engine, phase, step, oracle)?;
            engine.diffusion();
            snap(engine, phase, step, Op::Diffusion)?;
        }
    }
    Ok(trace)
}
