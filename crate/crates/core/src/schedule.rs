//! Rotation angle and choice of the phase-1 length `L`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::instance::ClassCounts;
use crate::reduced::{final_point, success_probability};

/// Window used by [`Policy::Swept`] around the formula value.
pub const DEFAULT_SWEEP_WINDOW: u64 = 8;

/// Angle quantities derived from the class sizes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngleParams {
    /// `2·asin(½·√(|X|/n))`, from the chord construction.
    pub theta_chord: f64,
    /// `√(|X|/n)`, the small-angle form.
    pub theta_approx: f64,
    /// Target angle for the end of phase 1.
    pub alpha_target: f64,
    /// Chord length `DS = √((|K11| + |K10|)/n)`.
    pub ds: f64,
}

pub fn compute_theta(counts: &ClassCounts) -> AngleParams {
    let ds = (counts.x_size() as f64 / counts.n() as f64).sqrt();
    AngleParams {
        theta_chord: 2.0 * (0.5 * ds).asin(),
        theta_approx: ds,
        alpha_target: PI / 2.0,
        ds,
    }
}

/// How `L` is picked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Policy {
    /// `round(π / (4θ))`.
    PaperFormula,
    /// `max(0, round(π / (4θ) - ½))`, so that `(2L+1)θ` lands nearest `π/2`.
    RoundedHalf,
    /// Best final success probability in a window around the formula value.
    Swept,
}

impl Policy {
    pub fn as_str(self) -> &'static str {
        match self {
            Policy::PaperFormula => "paper_formula",
            Policy::RoundedHalf => "rounded_half",
            Policy::Swept => "swept",
        }
    }
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Policy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "paper" | "paper_formula" => Ok(Policy::PaperFormula),
            "half" | "rounded_half" => Ok(Policy::RoundedHalf),
            "sweep" | "swept" => Ok(Policy::Swept),
            other => Err(format!(
                "unknown policy {other:?} (expected paper, half or sweep)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Schedule {
    /// Number of phase-1 steps.
    pub l: u64,
    /// `None` when `L` was set explicitly.
    pub policy: Option<Policy>,
}

impl Schedule {
    pub fn fixed(l: u64) -> Self {
        Schedule { l, policy: None }
    }

    pub fn policy_label(&self) -> &'static str {
        self.policy.map_or("fixed", Policy::as_str)
    }
}

fn formula_steps(counts: &ClassCounts) -> f64 {
    PI / (4.0 * compute_theta(counts).theta_chord)
}

pub fn choose_l(counts: &ClassCounts, policy: Policy) -> Schedule {
    let l = match policy {
        Policy::PaperFormula => formula_steps(counts).round() as u64,
        Policy::RoundedHalf => (formula_steps(counts) - 0.5).round().max(0.0) as u64,
        Policy::Swept => return sweep_l(counts, DEFAULT_SWEEP_WINDOW).best,
    };
    Schedule {
        l,
        policy: Some(policy),
    }
}

/// Result of scanning `L` around the formula value.
#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub best: Schedule,
    /// `(L, final z²)` in increasing `L`.
    pub table: Vec<(u64, f64)>,
}

/// Evaluates every `L` in `[max(0, L₀ - window), L₀ + window]` and keeps the
/// one with the largest final `z²`, preferring the smaller `L` on ties.
pub fn sweep_l(counts: &ClassCounts, window: u64) -> Sweep {
    let l0 = choose_l(counts, Policy::PaperFormula).l;
    let table: Vec<(u64, f64)> = (l0.saturating_sub(window)..=l0 + window)
        .map(|l| (l, success_probability(&final_point(counts, l))))
        .collect();
    let (best_l, _) = table
        .iter()
        .copied()
        .fold(None::<(u64, f64)>, |best, (l, p)| match best {
            Some((_, bp)) if bp >= p => best,
            _ => Some((l, p)),
        })
        .expect("window is never empty");
    Sweep {
        best: Schedule {
            l: best_l,
            policy: Some(Policy::Swept),
        },
        table,
    }
}
