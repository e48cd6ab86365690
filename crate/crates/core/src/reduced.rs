//! Exact simulation on the three-coordinate representation.
//!
//! Because every operation in the schedule treats all indices of a class
//! alike, the state is fully described by the weighted class amplitudes
//! `x = √|K00|·a00`, `y = √|K10|·a10`, `z = √|K11|·a11`, a point on the unit
//! sphere. `O_X` maps `(x, y, z)` to `(x, -y, -z)`, `O_Y` maps it to
//! `(x, y, -z)` and the diffusion reflects it through the line spanned by
//! the image `S` of the uniform superposition.

use nalgebra::{Matrix3, SymmetricEigen, Vector3};

use crate::cost::QueryStats;
use crate::engine::{self, Engine};
use crate::error::Error;
use crate::instance::ClassCounts;
use crate::schedule::Schedule;
use crate::trace::{Op, TraceRecord};

/// A point `(x, y, z)`; unit norm while it represents a quantum state.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ReducedState {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl ReducedState {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        ReducedState { x, y, z }
    }

    pub fn dot(&self, other: &ReducedState) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn norm_sq(&self) -> f64 {
        self.dot(self)
    }

    /// Largest coordinate-wise absolute difference.
    pub fn max_abs_diff(&self, other: &ReducedState) -> f64 {
        (self.x - other.x)
            .abs()
            .max((self.y - other.y).abs())
            .max((self.z - other.z).abs())
    }

    /// Per-index amplitudes `(a00, a10, a11)`; an empty class reports 0.
    pub fn class_amplitudes(&self, counts: &ClassCounts) -> (f64, f64, f64) {
        let a = |w: f64, k: u64| if k == 0 { 0.0 } else { w / (k as f64).sqrt() };
        (
            a(self.x, counts.k00),
            a(self.y, counts.k10),
            a(self.z, counts.k11),
        )
    }

    fn to_vector(self) -> Vector3<f64> {
        Vector3::new(self.x, self.y, self.z)
    }
}

/// The reduced image `S` of the uniform superposition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpherePoint {
    pub x_s: f64,
    pub y_s: f64,
    pub z_s: f64,
}

impl SpherePoint {
    pub fn from_counts(counts: &ClassCounts) -> Self {
        let n = counts.n() as f64;
        SpherePoint {
            x_s: (counts.k00 as f64 / n).sqrt(),
            y_s: (counts.k10 as f64 / n).sqrt(),
            z_s: (counts.k11 as f64 / n).sqrt(),
        }
    }

    pub fn as_state(&self) -> ReducedState {
        ReducedState::new(self.x_s, self.y_s, self.z_s)
    }
}

/// Phase-0 point, identical to `S`.
pub fn initial_point(counts: &ClassCounts) -> ReducedState {
    SpherePoint::from_counts(counts).as_state()
}

/// Reflection about the X axis.
pub fn apply_oracle_x(p: ReducedState) -> ReducedState {
    ReducedState::new(p.x, -p.y, -p.z)
}

/// Reflection about the XY plane.
pub fn apply_oracle_y(p: ReducedState) -> ReducedState {
    ReducedState::new(p.x, p.y, -p.z)
}

/// Reflection through the line spanned by `s`: `2(p·s)s - p`.
pub fn apply_diffusion(p: ReducedState, s: &SpherePoint) -> ReducedState {
    let s = s.as_state();
    let k = 2.0 * p.dot(&s);
    ReducedState::new(k * s.x - p.x, k * s.y - p.y, k * s.z - p.z)
}

pub fn success_probability(p: &ReducedState) -> f64 {
    p.z * p.z
}

/// Query-counting simulator over the reduced representation. O(1) memory.
#[derive(Debug, Clone)]
pub struct ReducedSimulator {
    counts: ClassCounts,
    s: SpherePoint,
    state: ReducedState,
    stats: QueryStats,
}

impl ReducedSimulator {
    pub fn new(counts: ClassCounts) -> Self {
        let s = SpherePoint::from_counts(&counts);
        ReducedSimulator {
            counts,
            s,
            state: s.as_state(),
            stats: QueryStats::default(),
        }
    }

    pub fn counts(&self) -> &ClassCounts {
        &self.counts
    }

    pub fn sphere_point(&self) -> &SpherePoint {
        &self.s
    }

    pub fn state(&self) -> ReducedState {
        self.state
    }
}

impl Engine for ReducedSimulator {
    fn reset(&mut self) {
        self.state = self.s.as_state();
        self.stats = QueryStats::default();
    }

    fn oracle_x(&mut self) {
        self.state = apply_oracle_x(self.state);
        self.stats.count_x += 1;
    }

    fn oracle_y(&mut self) {
        self.state = apply_oracle_y(self.state);
        self.stats.count_y += 1;
    }

    fn diffusion(&mut self) {
        self.state = apply_diffusion(self.state, &self.s);
    }

    fn point(&self) -> Result<ReducedState, Error> {
        Ok(self.state)
    }

    fn stats(&self) -> QueryStats {
        self.stats
    }
}

/// Outcome of one pass through the schedule on the reduced engine.
#[derive(Debug, Clone)]
pub struct ReducedRun {
    pub state: ReducedState,
    pub trace: Vec<TraceRecord>,
    pub stats: QueryStats,
}

impl ReducedRun {
    pub fn p_success(&self) -> f64 {
        success_probability(&self.state)
    }
}

pub fn run_schedule(counts: &ClassCounts, sched: &Schedule) -> ReducedRun {
    run_reduced(counts, sched.l, true)
}

/// Final point only; no trace is kept.
pub fn final_point(counts: &ClassCounts, l: u64) -> ReducedState {
    run_reduced(counts, l, false).state
}

fn run_reduced(counts: &ClassCounts, l: u64, record: bool) -> ReducedRun {
    let mut sim = ReducedSimulator::new(*counts);
    let trace = engine::execute(&mut sim, l, record).expect("reduced engine is infallible");
    ReducedRun {
        state: sim.state,
        trace,
        stats: sim.stats,
    }
}

/// The start point plus every phase-1 point taken after a diffusion.
pub fn phase1_points(trace: &[TraceRecord]) -> Vec<ReducedState> {
    trace
        .iter()
        .filter(|r| (r.phase == 0 && r.op == Op::Init) || (r.phase == 1 && r.op == Op::Diffusion))
        .map(|r| r.point)
        .collect()
}

/// Rotation angle between consecutive phase-1 points, about the sphere
/// centre. Each phase-1 step is the product of two half-turns, so the points
/// walk a great circle and these angles should all be equal.
pub fn phase1_rotation_check(trace: &[TraceRecord]) -> Result<Vec<f64>, Error> {
    let pts = phase1_points(trace);
    if pts.len() < 3 {
        return Err(Error::InsufficientTrace {
            found: pts.len(),
            needed: 3,
        });
    }
    Ok(pts
        .windows(2)
        .map(|w| {
            let (a, b) = (w[0].to_vector(), w[1].to_vector());
            a.cross(&b).norm().atan2(a.dot(&b))
        })
        .collect())
}

/// Largest distance of a phase-1 point from the least-squares plane through
/// all of them.
pub fn phase1_plane_residual(trace: &[TraceRecord]) -> Result<f64, Error> {
    let pts: Vec<_> = phase1_points(trace)
        .into_iter()
        .map(ReducedState::to_vector)
        .collect();
    if pts.len() < 3 {
        return Err(Error::InsufficientTrace {
            found: pts.len(),
            needed: 3,
        });
    }
    let centroid = pts.iter().sum::<Vector3<f64>>() / pts.len() as f64;
    let scatter = pts.iter().fold(Matrix3::zeros(), |acc, p| {
        let d = p - centroid;
        acc + d * d.transpose()
    });
    let eig = SymmetricEigen::new(scatter);
    let normal = eig.eigenvectors.column(eig.eigenvalues.imin()).into_owned();
    Ok(pts
        .iter()
        .map(|p| (p - centroid).dot(&normal).abs())
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schedule::{choose_l, Policy};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn counts(k11: u64, k10: u64, k00: u64) -> ClassCounts {
        ClassCounts::new(k11, k10, k00).unwrap()
    }

    fn close(a: ReducedState, b: ReducedState, tol: f64) {
        assert!(a.max_abs_diff(&b) <= tol, "{a:?} vs {b:?}");
    }

    #[test]
    fn initial_point_closed_form() {
        let p = initial_point(&counts(1, 3, 12));
        // √(12/16), √(3/16), √(1/16)
        close(
            p,
            ReducedState::new(0.8660254037844386, 0.4330127018922193, 0.25),
            1e-15,
        );
        close(
            initial_point(&counts(5, 0, 0)),
            ReducedState::new(0.0, 0.0, 1.0),
            0.0,
        );
        let h = std::f64::consts::FRAC_1_SQRT_2;
        close(
            initial_point(&counts(2, 2, 0)),
            ReducedState::new(0.0, h, h),
            1e-15,
        );
    }

    #[test]
    fn sphere_point_is_unit() {
        for c in [counts(1, 3, 12), counts(7, 100, 3), counts(1, 0, 1)] {
            assert_abs_diff_eq!(initial_point(&c).norm_sq(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn oracle_reflections() {
        let p = ReducedState::new(0.8660254037844386, 0.4330127018922193, 0.25);
        assert_eq!(apply_oracle_x(p), ReducedState::new(p.x, -p.y, -p.z));
        assert_eq!(apply_oracle_x(apply_oracle_x(p)), p);
        let e = ReducedState::new(1.0, 0.0, 0.0);
        assert_eq!(apply_oracle_x(e).x, 1.0);
        assert_eq!(apply_oracle_x(e).y.abs(), 0.0);

        let q = ReducedState::new(0.5, 0.5, 0.5f64.sqrt());
        assert_eq!(
            apply_oracle_y(q),
            ReducedState::new(0.5, 0.5, -(0.5f64.sqrt()))
        );
        assert_eq!(apply_oracle_y(apply_oracle_y(q)), q);
        let f = ReducedState::new(0.0, 1.0, 0.0);
        assert_eq!(apply_oracle_y(f).y, 1.0);
        assert_eq!(apply_oracle_y(f).z.abs(), 0.0);
    }

    #[test]
    fn diffusion_examples() {
        let s = SpherePoint::from_counts(&counts(1, 3, 12));
        close(apply_diffusion(s.as_state(), &s), s.as_state(), 1e-15);

        // A vector orthogonal to s is negated.
        let perp = ReducedState::new(-s.y_s, s.x_s, 0.0);
        let inv = 1.0 / perp.norm_sq().sqrt();
        let perp = ReducedState::new(perp.x * inv, perp.y * inv, 0.0);
        close(
            apply_diffusion(perp, &s),
            ReducedState::new(-perp.x, -perp.y, 0.0),
            1e-15,
        );

        // 2(p·s)s - p with p = e_x: 2·(√3/2)·s - e_x
        let got = apply_diffusion(ReducedState::new(1.0, 0.0, 0.0), &s);
        close(got, ReducedState::new(0.5, 0.75, 0.4330127018922193), 1e-15);
    }

    #[test]
    fn success_probability_examples() {
        assert_eq!(success_probability(&ReducedState::new(0.0, 0.0, 1.0)), 1.0);
        let p = ReducedState::new(0.8660254037844386, 0.4330127018922193, 0.25);
        assert_eq!(success_probability(&p), 0.0625);
        assert_eq!(
            success_probability(&initial_point(&counts(1, 3, 12))),
            1.0 / 16.0
        );
    }

    #[test]
    fn degenerate_schedule() {
        let c = counts(1, 3, 12);
        let run = run_schedule(&c, &Schedule::fixed(0));
        let ops: Vec<_> = run.trace.iter().map(|r| r.op).collect();
        assert_eq!(ops, [Op::Init, Op::OracleY, Op::Diffusion]);
        assert_eq!((run.stats.count_x, run.stats.count_y), (0, 1));
    }

    #[test]
    fn query_counts_for_l6() {
        let run = run_schedule(&counts(1, 15, 1008), &Schedule::fixed(6));
        assert_eq!((run.stats.count_x, run.stats.count_y), (18, 1));
        assert_eq!(run.trace.len() as u64, engine::trace_len(6));
    }

    #[test]
    fn trace_is_ordered_and_labelled() {
        let run = run_schedule(&counts(1, 3, 12), &Schedule::fixed(2));
        let labels: Vec<_> = run.trace.iter().map(|r| (r.phase, r.step, r.op)).collect();
        use Op::*;
        assert_eq!(
            labels,
            [
                (0, 0, Init),
                (1, 0, OracleX),
                (1, 0, Diffusion),
                (1, 1, OracleX),
                (1, 1, Diffusion),
                (2, 0, OracleY),
                (2, 0, Diffusion),
                (3, 0, OracleX),
                (3, 0, Diffusion),
                (3, 1, OracleX),
                (3, 1, Diffusion),
                (3, 2, OracleX),
                (3, 2, Diffusion),
                (3, 3, OracleX),
                (3, 3, Diffusion),
            ]
        );
        assert!(run.trace.iter().all(|r| (0.0..=1.0).contains(&r.p_success)));
    }

    #[test]
    fn rotation_check_needs_three_points() {
        let run = run_schedule(&counts(1, 3, 12), &Schedule::fixed(1));
        assert_eq!(
            phase1_rotation_check(&run.trace),
            Err(Error::InsufficientTrace {
                found: 2,
                needed: 3
            })
        );
        let run = run_schedule(&counts(1, 3, 12), &Schedule::fixed(2));
        let angles = phase1_rotation_check(&run.trace).unwrap();
        assert_eq!(angles.len(), 2);
        assert!(angles.iter().all(|a| a.is_finite() && *a > 0.0));
    }

    #[test]
    fn phase1_angle_matches_chord_geometry() {
        let c = counts(1, 15, 1008);
        let run = run_schedule(&c, &Schedule::fixed(6));
        let angles = phase1_rotation_check(&run.trace).unwrap();
        let theta = crate::schedule::compute_theta(&c).theta_chord;
        for a in &angles {
            assert!((a - angles[0]).abs() <= 1e-9);
            assert!(
                ((a - 2.0 * theta) / (2.0 * theta)).abs() <= 0.05,
                "{a} vs {}",
                2.0 * theta
            );
        }
        // The exact angle of the composed half-turns is 2·asin(√(|X|/n)).
        assert_abs_diff_eq!(
            angles[0],
            2.0 * (16.0f64 / 1024.0).sqrt().asin(),
            epsilon = 1e-12
        );
        assert!(phase1_plane_residual(&run.trace).unwrap() <= 1e-9);
    }

    #[test]
    fn frozen_axes_stay_zero() {
        // X = Y: K10 is empty, y must stay exactly 0.
        let run = run_schedule(&counts(4, 0, 60), &Schedule::fixed(3));
        assert!(run.trace.iter().all(|r| r.point.y == 0.0));
        // X = universe: K00 is empty, x must stay exactly 0.
        let run = run_schedule(&counts(4, 60, 0), &Schedule::fixed(3));
        assert!(run.trace.iter().all(|r| r.point.x == 0.0));
    }

    #[test]
    fn long_run_norm_drift() {
        let c = counts(3, 250, 100_000);
        let mut sim = ReducedSimulator::new(c);
        sim.reset();
        for i in 0..100_000u32 {
            match i % 4 {
                0 => sim.oracle_x(),
                2 => sim.oracle_y(),
                _ => sim.diffusion(),
            }
        }
        assert!((sim.state().norm_sq() - 1.0).abs() <= 1e-9);
    }

    prop_compose! {
        fn arb_counts()(k11 in 1u64..500, k10 in 0u64..5000, k00 in 0u64..50_000) -> ClassCounts {
            ClassCounts::new(k11, k10, k00.max(u64::from(k11 + k10 < 2))).unwrap()
        }
    }

    proptest! {
        #[test]
        fn operations_preserve_norm_and_involute(c in arb_counts(), ops in prop::collection::vec(0u8..3, 1..200)) {
            let s = SpherePoint::from_counts(&c);
            let mut p = s.as_state();
            for op in ops {
                let before = p;
                p = match op {
                    0 => apply_oracle_x(p),
                    1 => apply_oracle_y(p),
                    _ => apply_diffusion(p, &s),
                };
                prop_assert!((p.norm_sq() - 1.0).abs() <= 1e-12);
                if op < 2 {
                    prop_assert_eq!(p.x.to_bits(), before.x.to_bits());
                }
                let back = match op {
                    0 => apply_oracle_x(p),
                    1 => apply_oracle_y(p),
                    _ => apply_diffusion(p, &s),
                };
                prop_assert!(back.max_abs_diff(&before) <= 1e-12);
            }
        }

        #[test]
        fn phase1_is_a_planar_rotation(c in arb_counts()) {
            let l = choose_l(&c, Policy::PaperFormula).l.clamp(2, 400);
            let run = run_schedule(&c, &Schedule::fixed(l));
            let angles = phase1_rotation_check(&run.trace).unwrap();
            for a in &angles {
                prop_assert!((a - angles[0]).abs() <= 1e-9);
            }
            prop_assert!(phase1_plane_residual(&run.trace).unwrap() <= 1e-9);
        }
    }
}
