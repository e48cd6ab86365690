//! Brute-force simulation over all `n` amplitudes.
//!
//! This is the independent check on the reduced simulator: it never uses the
//! class structure to evolve the state, only to project it afterwards.

use std::io::{Read, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cost::QueryStats;
use crate::engine::{self, Engine};
use crate::error::Error;
use crate::instance::{Class, ClassCounts, ProblemInstance};
use crate::reduced::ReducedState;
use crate::schedule::Schedule;
use crate::trace::TraceRecord;

/// Default limit on the number of amplitudes the full engine will allocate.
pub const DEFAULT_FULL_CAP: u64 = 1 << 20;

const DUMP_MAGIC: &[u8; 4] = b"IGSV";
const DUMP_VERSION: u32 = 1;

/// Largest within-class spread tolerated by [`project_to_reduced`].
pub const UNIFORMITY_TOL: f64 = 1e-9;

/// Which predicate an oracle call evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Oracle {
    X,
    Y,
}

/// Real amplitudes `d_0 .. d_{n-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct FullState {
    amplitudes: Vec<f64>,
}

impl FullState {
    pub fn init_uniform(n: usize) -> Self {
        let a = 1.0 / (n as f64).sqrt();
        FullState {
            amplitudes: vec![a; n],
        }
    }

    pub fn from_amplitudes(amplitudes: Vec<f64>) -> Self {
        FullState { amplitudes }
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn norm_sq(&self) -> f64 {
        pairwise_sum(&self.amplitudes.iter().map(|d| d * d).collect::<Vec<_>>())
    }

    /// `d_i ↦ (-1)^{f(i)} d_i`, evaluating the predicate index by index.
    pub fn apply_oracle(&mut self, inst: &ProblemInstance, which: Oracle) -> Result<(), Error> {
        self.check_dim(inst)?;
        for (i, d) in self.amplitudes.iter_mut().enumerate() {
            let marked = match which {
                Oracle::X => inst.f_x(i as u64),
                Oracle::Y => inst.f_y(i as u64),
            };
            if marked {
                *d = -*d;
            }
        }
        Ok(())
    }

    /// Inversion about the mean: `d_i ↦ 2m - d_i`.
    pub fn apply_diffusion(&mut self) {
        let two_m = 2.0 * pairwise_sum(&self.amplitudes) / self.amplitudes.len() as f64;
        for d in &mut self.amplitudes {
            *d = two_m - *d;
        }
    }

    fn check_dim(&self, inst: &ProblemInstance) -> Result<(), Error> {
        if self.amplitudes.len() as u64 != inst.n() {
            return Err(Error::DimensionMismatch {
                state: self.amplitudes.len(),
                instance: inst.n(),
            });
        }
        Ok(())
    }

    /// Debug dump: `"IGSV"`, version `u32`, `n` as `u64`, then `n` `f64`s,
    /// all little-endian.
    pub fn write_dump<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        out.write_all(DUMP_MAGIC)?;
        out.write_all(&DUMP_VERSION.to_le_bytes())?;
        out.write_all(&(self.amplitudes.len() as u64).to_le_bytes())?;
        for d in &self.amplitudes {
            out.write_all(&d.to_le_bytes())?;
        }
        out.flush()
    }

    pub fn read_dump<R: Read>(mut input: R) -> Result<Self, Error> {
        let io = |e: std::io::Error| Error::BadDump(e.to_string());
        let mut header = [0u8; 16];
        input.read_exact(&mut header).map_err(io)?;
        if &header[..4] != DUMP_MAGIC {
            return Err(Error::BadDump("bad magic".into()));
        }
        let version = u32::from_le_bytes(header[4..8].try_into().unwrap());
        if version != DUMP_VERSION {
            return Err(Error::BadDump(format!("unsupported version {version}")));
        }
        let n = u64::from_le_bytes(header[8..16].try_into().unwrap());
        let mut buf = Vec::new();
        input.read_to_end(&mut buf).map_err(io)?;
        if buf.len() as u64 != n * 8 {
            return Err(Error::BadDump(format!(
                "expected {} payload bytes, found {}",
                n * 8,
                buf.len()
            )));
        }
        let amplitudes = buf
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
            .collect();
        Ok(FullState { amplitudes })
    }
}

/// Deterministic pairwise summation; the order depends only on the length.
pub(crate) fn pairwise_sum(v: &[f64]) -> f64 {
    const LEAF: usize = 64;
    if v.len() <= LEAF {
        v.iter().sum()
    } else {
        let (a, b) = v.split_at(v.len() / 2);
        pairwise_sum(a) + pairwise_sum(b)
    }
}

fn class_labels(inst: &ProblemInstance) -> Vec<Class> {
    (0..inst.n()).map(|i| inst.class_of(i)).collect()
}

fn project_with_labels(
    st: &FullState,
    labels: &[Class],
    counts: &ClassCounts,
) -> Result<ReducedState, Error> {
    // (first value, min, max) per class
    let mut seen: [Option<(f64, f64, f64)>; 3] = [None; 3];
    for (&d, &c) in st.amplitudes.iter().zip(labels) {
        let slot = &mut seen[c as usize];
        *slot = Some(match *slot {
            None => (d, d, d),
            Some((first, lo, hi)) => (first, lo.min(d), hi.max(d)),
        });
    }
    let mut coord = [0.0; 3];
    for class in Class::ALL {
        if let Some((first, lo, hi)) = seen[class as usize] {
            if hi - lo > UNIFORMITY_TOL {
                return Err(Error::NotClassUniform {
                    class: class.name(),
                    spread: hi - lo,
                });
            }
            coord[class as usize] = (counts.get(class) as f64).sqrt() * first;
        }
    }
    Ok(ReducedState::new(coord[0], coord[1], coord[2]))
}

/// `(√k00·a00, √k10·a10, √k11·a11)` for a class-uniform state.
pub fn project_to_reduced(st: &FullState, inst: &ProblemInstance) -> Result<ReducedState, Error> {
    st.check_dim(inst)?;
    project_with_labels(st, &class_labels(inst), &inst.partition_classes())
}

/// Largest within-class amplitude spread, over all three classes.
pub fn class_spread(st: &FullState, inst: &ProblemInstance) -> Result<f64, Error> {
    st.check_dim(inst)?;
    let mut bounds = [(f64::INFINITY, f64::NEG_INFINITY); 3];
    for (i, &d) in st.amplitudes.iter().enumerate() {
        let b = &mut bounds[inst.class_of(i as u64) as usize];
        *b = (b.0.min(d), b.1.max(d));
    }
    Ok(bounds
        .iter()
        .filter(|b| b.0 <= b.1)
        .map(|b| b.1 - b.0)
        .fold(0.0, f64::max))
}

/// Precomputed cumulative distribution of `d_i²`.
#[derive(Debug, Clone)]
pub struct MeasurementSampler {
    cdf: Vec<f64>,
}

impl MeasurementSampler {
    pub fn new(st: &FullState) -> Self {
        let mut acc = 0.0;
        let cdf = st
            .amplitudes
            .iter()
            .map(|d| {
                acc += d * d;
                acc
            })
            .collect();
        MeasurementSampler { cdf }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let total = *self.cdf.last().expect("nonempty state");
        let u = rng.gen::<f64>() * total;
        // First index whose cumulative weight exceeds u; zero-weight indices
        // are never selected.
        self.cdf
            .partition_point(|&c| c <= u)
            .min(self.cdf.len() - 1)
    }
}

/// One measurement of the index register with a fresh generator seeded by `seed`.
pub fn sample_measurement(st: &FullState, seed: u64) -> usize {
    MeasurementSampler::new(st).sample(&mut ChaCha8Rng::seed_from_u64(seed))
}

/// Full-state engine. Oracle signs come from a per-index class table built
/// once from the predicates.
#[derive(Debug, Clone)]
pub struct FullSimulator {
    counts: ClassCounts,
    labels: Vec<Class>,
    state: FullState,
    stats: QueryStats,
}

impl FullSimulator {
    pub fn new(inst: &ProblemInstance, cap: u64) -> Result<Self, Error> {
        if inst.n() > cap {
            return Err(Error::InstanceTooLarge { n: inst.n(), cap });
        }
        Ok(FullSimulator {
            counts: inst.partition_classes(),
            labels: class_labels(inst),
            state: FullState::init_uniform(inst.n() as usize),
            stats: QueryStats::default(),
        })
    }

    pub fn state(&self) -> &FullState {
        &self.state
    }

    pub fn into_state(self) -> FullState {
        self.state
    }

    fn flip_where(&mut self, marked: impl Fn(Class) -> bool) {
        for (d, &c) in self.state.amplitudes.iter_mut().zip(&self.labels) {
            if marked(c) {
                *d = -*d;
            }
        }
    }
}

impl Engine for FullSimulator {
    fn reset(&mut self) {
        self.state = FullState::init_uniform(self.labels.len());
        self.stats = QueryStats::default();
    }

    fn oracle_x(&mut self) {
        self.flip_where(|c| c != Class::K00);
        self.stats.count_x += 1;
    }

    fn oracle_y(&mut self) {
        self.flip_where(|c| c == Class::K11);
        self.stats.count_y += 1;
    }

    fn diffusion(&mut self) {
        self.state.apply_diffusion();
    }

    fn point(&self) -> Result<ReducedState, Error> {
        project_with_labels(&self.state, &self.labels, &self.counts)
    }

    fn stats(&self) -> QueryStats {
        self.stats
    }
}

#[derive(Debug, Clone)]
pub struct FullRun {
    pub state: FullState,
    /// Class-projected point after every operation.
    pub trace: Vec<TraceRecord>,
    pub stats: QueryStats,
}

pub fn run_schedule_full(
    inst: &ProblemInstance,
    sched: &Schedule,
    cap: u64,
) -> Result<FullRun, Error> {
    run_full(inst, sched, cap, true)
}

/// Like [`run_schedule_full`] but without recording a trace.
pub fn run_schedule_full_untraced(
    inst: &ProblemInstance,
    sched: &Schedule,
    cap: u64,
) -> Result<FullRun, Error> {
    run_full(inst, sched, cap, false)
}

fn run_full(
    inst: &ProblemInstance,
    sched: &Schedule,
    cap: u64,
    record: bool,
) -> Result<FullRun, Error> {
    let mut sim = FullSimulator::new(inst, cap)?;
    let trace = engine::execute(&mut sim, sched.l, record)?;
    let stats = sim.stats();
    Ok(FullRun {
        state: sim.into_state(),
        trace,
        stats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::MembershipSpec;
    use crate::reduced::{initial_point, run_schedule};
    use crate::schedule::{choose_l, Policy};
    use proptest::prelude::*;

    fn ref16() -> ProblemInstance {
        ProblemInstance::new(16, MembershipSpec::range(0, 3), MembershipSpec::list([2])).unwrap()
    }

    fn n4(x: &[u64], y: &[u64]) -> ProblemInstance {
        ProblemInstance::new(4, MembershipSpec::list(x), MembershipSpec::list(y)).unwrap()
    }

    #[test]
    fn uniform_init() {
        assert_eq!(FullState::init_uniform(4).amplitudes(), [0.5; 4]);
        for a in FullState::init_uniform(2).amplitudes() {
            assert!((a - std::f64::consts::FRAC_1_SQRT_2).abs() <= 1e-15);
        }
        assert!((FullState::init_uniform(1000).norm_sq() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn oracle_flips_marked_signs() {
        let inst = n4(&[0, 1], &[0]);
        let mut st = FullState::init_uniform(4);
        st.apply_oracle(&inst, Oracle::X).unwrap();
        assert_eq!(st.amplitudes(), [-0.5, -0.5, 0.5, 0.5]);
        st.apply_oracle(&inst, Oracle::X).unwrap();
        assert_eq!(st, FullState::init_uniform(4));
        st.apply_oracle(&inst, Oracle::Y).unwrap();
        assert_eq!(st.amplitudes(), [-0.5, 0.5, 0.5, 0.5]);

        let mut wrong = FullState::init_uniform(8);
        assert_eq!(
            wrong.apply_oracle(&inst, Oracle::X),
            Err(Error::DimensionMismatch {
                state: 8,
                instance: 4
            })
        );
    }

    #[test]
    fn diffusion_examples() {
        let mut u = FullState::init_uniform(4);
        u.apply_diffusion();
        assert_eq!(u, FullState::init_uniform(4));

        let mut st = FullState::from_amplitudes(vec![-0.5, -0.5, 0.5, 0.5]);
        st.apply_diffusion();
        assert_eq!(st.amplitudes(), [0.5, 0.5, -0.5, -0.5]);

        // Single marked element at n = 4: one Grover step reaches certainty.
        let mut st = FullState::from_amplitudes(vec![-0.5, 0.5, 0.5, 0.5]);
        st.apply_diffusion();
        assert_eq!(st.amplitudes(), [1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn schedule_counts_and_agreement() {
        let inst = ref16();
        let run = run_schedule_full(&inst, &Schedule::fixed(1), DEFAULT_FULL_CAP).unwrap();
        assert_eq!((run.stats.count_x, run.stats.count_y), (3, 1));

        let c = inst.partition_classes();
        let sched = choose_l(&c, Policy::PaperFormula);
        let full = run_schedule_full(&inst, &sched, DEFAULT_FULL_CAP).unwrap();
        let reduced = run_schedule(&c, &sched);
        assert_eq!(full.trace.len(), reduced.trace.len());
        for (a, b) in full.trace.iter().zip(&reduced.trace) {
            assert_eq!((a.phase, a.step, a.op), (b.phase, b.step, b.op));
            assert!(a.point.max_abs_diff(&b.point) <= 1e-9);
        }
        let last = project_to_reduced(&full.state, &inst).unwrap();
        assert!((last.z * last.z - reduced.p_success()).abs() <= 1e-9);
    }

    #[test]
    fn zero_l_single_target_n4() {
        let inst = n4(&[0], &[0]);
        let run = run_schedule_full(&inst, &Schedule::fixed(0), DEFAULT_FULL_CAP).unwrap();
        assert_eq!(run.state.amplitudes(), [1.0, 0.0, 0.0, 0.0]);
        assert_eq!(
            project_to_reduced(&run.state, &inst).unwrap(),
            ReducedState::new(0.0, 0.0, 1.0)
        );
    }

    #[test]
    fn size_cap() {
        let inst = ProblemInstance::from_sizes(64, 4, 1).unwrap();
        assert_eq!(
            run_schedule_full(&inst, &Schedule::fixed(1), 32).unwrap_err(),
            Error::InstanceTooLarge { n: 64, cap: 32 }
        );
    }

    #[test]
    fn projection_of_uniform_state() {
        let p = project_to_reduced(&FullState::init_uniform(16), &ref16()).unwrap();
        assert!(p.max_abs_diff(&initial_point(&ref16().partition_classes())) <= 1e-15);
    }

    #[test]
    fn projection_rejects_non_uniform_class() {
        let inst = ref16();
        let mut amps = vec![0.25; 16];
        amps[0] = 0.3;
        amps[1] = 0.2;
        let err = project_to_reduced(&FullState::from_amplitudes(amps), &inst).unwrap_err();
        assert!(
            matches!(err, Error::NotClassUniform { class: "K10", .. }),
            "{err:?}"
        );
    }

    #[test]
    fn deterministic_sampling() {
        let st = FullState::from_amplitudes(vec![0.0, 0.0, 1.0, 0.0]);
        for seed in 0..50 {
            assert_eq!(sample_measurement(&st, seed), 2);
        }
        let u = FullState::init_uniform(4);
        assert_eq!(sample_measurement(&u, 99), sample_measurement(&u, 99));
    }

    #[test]
    fn uniform_sampling_frequencies() {
        let st = FullState::init_uniform(4);
        let sampler = MeasurementSampler::new(&st);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut hist = [0u32; 4];
        let draws = 100_000;
        for _ in 0..draws {
            hist[sampler.sample(&mut rng)] += 1;
        }
        for h in hist {
            assert!((h as f64 / draws as f64 - 0.25).abs() <= 0.01, "{hist:?}");
        }
    }

    #[test]
    fn dump_round_trip() {
        let st = FullState::from_amplitudes(vec![0.5, -0.25, 1e-300, -0.0]);
        let mut buf = Vec::new();
        st.write_dump(&mut buf).unwrap();
        assert_eq!(&buf[..4], b"IGSV");
        assert_eq!(u32::from_le_bytes(buf[4..8].try_into().unwrap()), 1);
        assert_eq!(u64::from_le_bytes(buf[8..16].try_into().unwrap()), 4);
        assert_eq!(buf.len(), 16 + 32);
        let back = FullState::read_dump(buf.as_slice()).unwrap();
        assert!(back
            .amplitudes()
            .iter()
            .zip(st.amplitudes())
            .all(|(a, b)| a.to_bits() == b.to_bits()));

        buf[0] = b'X';
        assert!(FullState::read_dump(buf.as_slice()).is_err());
        assert!(FullState::read_dump(&b"IGSV"[..]).is_err());
    }

    proptest! {
        #[test]
        fn schedule_keeps_norm_uniformity_and_mean(
            n in 2u64..300,
            xf in 0.0f64..1.0,
            yf in 0.0f64..1.0,
            l in 0u64..12,
        ) {
            let x = ((n as f64 * xf) as u64).clamp(1, n);
            let y = ((x as f64 * yf) as u64).clamp(1, x);
            let inst = ProblemInstance::from_sizes(n, x, y).unwrap();
            let mut sim = FullSimulator::new(&inst, DEFAULT_FULL_CAP).unwrap();
            sim.reset();
            for i in 0..(6 * l + 2) {
                match i % 2 {
                    0 if i == 2 * l => sim.oracle_y(),
                    0 => sim.oracle_x(),
                    _ => {
                        let before = pairwise_sum(sim.state().amplitudes());
                        sim.diffusion();
                        let after = pairwise_sum(sim.state().amplitudes());
                        prop_assert!((before - after).abs() <= 1e-12);
                    }
                }
                prop_assert!((sim.state().norm_sq() - 1.0).abs() <= 1e-12);
                prop_assert!(class_spread(sim.state(), &inst).unwrap() <= 1e-12);
                prop_assert!(sim.point().is_ok());
            }
        }
    }
}
