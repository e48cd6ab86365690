//! Per-operation trace records and their CSV form.
//!
//! CSV header: `phase,step,op,x,y,z,p_success`. Floats are written with 17
//! significant digits so a trace read back is bit-identical.

use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use crate::reduced::ReducedState;

pub const TRACE_HEADER: [&str; 7] = ["phase", "step", "op", "x", "y", "z", "p_success"];

/// One schedule operation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Op {
    Init,
    OracleX,
    OracleY,
    Diffusion,
}

impl Op {
    pub fn as_str(self) -> &'static str {
        match self {
            Op::Init => "init",
            Op::OracleX => "oracle_x",
            Op::OracleY => "oracle_y",
            Op::Diffusion => "diffusion",
        }
    }
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Op {
    type Err = TraceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "init" => Ok(Op::Init),
            "oracle_x" => Ok(Op::OracleX),
            "oracle_y" => Ok(Op::OracleY),
            "diffusion" => Ok(Op::Diffusion),
            other => Err(TraceError::Format(format!("unknown op {other:?}"))),
        }
    }
}

/// Snapshot of the reduced point right after an operation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRecord {
    /// 0 for initialization, 1..=3 for the main phases.
    pub phase: u8,
    /// Step index within the phase.
    pub step: u64,
    pub op: Op,
    pub point: ReducedState,
    /// `z²`, the probability of measuring an index in `K11`.
    pub p_success: f64,
}

impl TraceRecord {
    pub fn new(phase: u8, step: u64, op: Op, point: ReducedState) -> Self {
        TraceRecord {
            phase,
            step,
            op,
            point,
            p_success: point.z * point.z,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum TraceError {
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("malformed trace: {0}")]
    Format(String),
}

/// Shortest digits that parse back to the same value.
fn fmt_f64(v: f64) -> String {
    format!("{v:e}")
}

pub fn write_trace_csv<W: Write>(out: W, trace: &[TraceRecord]) -> Result<(), TraceError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(TRACE_HEADER)?;
    for r in trace {
        w.write_record([
            r.phase.to_string(),
            r.step.to_string(),
            r.op.as_str().to_string(),
            fmt_f64(r.point.x),
            fmt_f64(r.point.y),
            fmt_f64(r.point.z),
            fmt_f64(r.p_success),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_trace_csv<R: Read>(input: R) -> Result<Vec<TraceRecord>, TraceError> {
    let mut rdr = csv::Reader::from_reader(input);
    if rdr.headers()?.iter().ne(TRACE_HEADER) {
        return Err(TraceError::Format("unexpected header".into()));
    }
    let bad = |e: &dyn fmt::Display| TraceError::Format(e.to_string());
    let mut out = Vec::new();
    for row in rdr.records() {
        let row = row?;
        if row.len() != TRACE_HEADER.len() {
            return Err(TraceError::Format(format!("row has {} fields", row.len())));
        }
        let float = |k: usize| row[k].parse::<f64>().map_err(|e| bad(&e));
        out.push(TraceRecord {
            phase: row[0].parse().map_err(|e| bad(&e))?,
            step: row[1].parse().map_err(|e| bad(&e))?,
            op: row[2].parse()?,
            point: ReducedState::new(float(3)?, float(4)?, float(5)?),
            p_success: float(6)?,
        });
    }
    Ok(out)
}
