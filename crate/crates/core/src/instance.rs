//! Problem instances for the two-set intersection search.
//!
//! An instance is a search space `{0, .., n-1}` together with two membership
//! predicates `f_X` and `f_Y` with `Y ⊆ X`. Every index falls into exactly
//! one of three classes: `K11 = Y`, `K10 = X \ Y` and `K00 = complement(X)`.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::InstanceError;

/// Membership description of a subset of `{0, .., n-1}`.
///
/// Each form answers `contains` in `O(1)` (range, modular rule) or
/// `O(log |S|)` (explicit list).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum MembershipSpec {
    /// Explicit, strictly increasing list of members.
    List { members: Vec<u64> },
    /// Inclusive range `lo..=hi`.
    Range { lo: u64, hi: u64 },
    /// All `i` with `i mod m == r`.
    Mod { m: u64, r: u64 },
}

impl MembershipSpec {
    pub fn list(members: impl Into<Vec<u64>>) -> Self {
        MembershipSpec::List {
            members: members.into(),
        }
    }

    pub fn range(lo: u64, hi: u64) -> Self {
        MembershipSpec::Range { lo, hi }
    }

    pub fn modular(m: u64, r: u64) -> Self {
        MembershipSpec::Mod { m, r }
    }

    /// Checks the description is well formed for a universe of size `n`.
    fn validate(&self, n: u64) -> Result<(), InstanceError> {
        match self {
            MembershipSpec::List { members } => {
                if let Some(w) = members.windows(2).find(|w| w[0] >= w[1]) {
                    return Err(InstanceError::InvalidSpec(format!(
                        "list members must be sorted and unique ({} followed by {})",
                        w[0], w[1]
                    )));
                }
                match members.last() {
                    Some(&last) if last >= n => {
                        Err(InstanceError::IndexOutOfRange { index: last, n })
                    }
                    _ => Ok(()),
                }
            }
            MembershipSpec::Range { lo, hi } => {
                if lo > hi {
                    return Err(InstanceError::InvalidSpec(format!(
                        "range lo = {lo} exceeds hi = {hi}"
                    )));
                }
                if *hi >= n {
                    return Err(InstanceError::IndexOutOfRange { index: *hi, n });
                }
                Ok(())
            }
            MembershipSpec::Mod { m, r } => {
                if *m == 0 {
                    return Err(InstanceError::InvalidSpec("modulus m must be >= 1".into()));
                }
                if r >= m {
                    return Err(InstanceError::InvalidSpec(format!(
                        "residue r = {r} must be below modulus m = {m}"
                    )));
                }
                Ok(())
            }
        }
    }

    /// Membership test. Indices outside the universe are never members of a
    /// range or list; callers bound-check against `n` separately.
    pub fn contains(&self, i: u64) -> bool {
        match self {
            MembershipSpec::List { members } => members.binary_search(&i).is_ok(),
            MembershipSpec::Range { lo, hi } => (*lo..=*hi).contains(&i),
            MembershipSpec::Mod { m, r } => i % m == *r,
        }
    }

    /// Number of members inside `{0, .., n-1}`.
    pub fn count(&self, n: u64) -> u64 {
        match self {
            MembershipSpec::List { members } => members.len() as u64,
            MembershipSpec::Range { lo, hi } => hi - lo + 1,
            MembershipSpec::Mod { m, r } => {
                if *r >= n {
                    0
                } else {
                    (n - 1 - r) / m + 1
                }
            }
        }
    }

    /// The `k`-th smallest member (0-based) inside `{0, .., n-1}`.
    pub fn nth(&self, n: u64, k: u64) -> Option<u64> {
        if k >= self.count(n) {
            return None;
        }
        Some(match self {
            MembershipSpec::List { members } => members[k as usize],
            MembershipSpec::Range { lo, .. } => lo + k,
            MembershipSpec::Mod { m, r } => r + k * m,
        })
    }

    /// Members in increasing order.
    pub fn iter(&self, n: u64) -> impl Iterator<Item = u64> + '_ {
        (0..self.count(n)).map(move |k| self.nth(n, k).expect("k < count"))
    }

    /// Decides `self ⊆ other` without enumeration where the shapes allow it.
    /// `None` means the caller has to enumerate.
    fn subset_hint(&self, other: &MembershipSpec, n: u64) -> Option<bool> {
        use MembershipSpec::*;
        let count = self.count(n);
        if count == 0 {
            return Some(true);
        }
        let first = self.nth(n, 0)?;
        let last = self.nth(n, count - 1)?;
        match (self, other) {
            (List { .. }, _) | (_, List { .. }) => None,
            (_, Range { lo, hi }) => Some(*lo <= first && last <= *hi),
            (_, Mod { m: 1, .. }) => Some(true),
            (_, Mod { .. }) if count == 1 => Some(other.contains(first)),
            // Two or more consecutive integers never share a residue mod m >= 2.
            (Range { .. }, Mod { .. }) => Some(false),
            (Mod { m: my, r: ry }, Mod { m: mx, r: rx }) => Some(my % mx == 0 && ry % mx == *rx),
        }
    }
}

/// The class of an index under the two predicates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Class {
    /// `f_X = false`, `f_Y = false`.
    K00,
    /// `f_X = true`, `f_Y = false`.
    K10,
    /// `f_X = true`, `f_Y = true`.
    K11,
}

impl Class {
    pub const ALL: [Class; 3] = [Class::K00, Class::K10, Class::K11];

    pub fn name(self) -> &'static str {
        match self {
            Class::K00 => "K00",
            Class::K10 => "K10",
            Class::K11 => "K11",
        }
    }
}

impl fmt::Display for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Sizes of the three index classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ClassCounts {
    pub k11: u64,
    pub k10: u64,
    pub k00: u64,
}

impl ClassCounts {
    /// Builds counts directly from class sizes. Requires at least one target
    /// and a universe of at least two indices.
    pub fn new(k11: u64, k10: u64, k00: u64) -> Result<Self, InstanceError> {
        if k11 == 0 {
            return Err(InstanceError::EmptyY);
        }
        let counts = ClassCounts { k11, k10, k00 };
        if counts.n() < 2 {
            return Err(InstanceError::TooSmall(counts.n()));
        }
        Ok(counts)
    }

    /// Counts for `n`, `|X|`, `|Y|` with `Y ⊆ X`.
    pub fn from_sizes(n: u64, x_size: u64, y_size: u64) -> Result<Self, InstanceError> {
        if y_size == 0 {
            return Err(InstanceError::EmptyY);
        }
        if y_size > x_size {
            return Err(InstanceError::InvalidSpec(format!(
                "|Y| = {y_size} exceeds |X| = {x_size}"
            )));
        }
        if x_size > n {
            return Err(InstanceError::InvalidSpec(format!(
                "|X| = {x_size} exceeds n = {n}"
            )));
        }
        ClassCounts::new(y_size, x_size - y_size, n - x_size)
    }

    pub fn n(&self) -> u64 {
        self.k11 + self.k10 + self.k00
    }

    /// `|X| = |K11| + |K10|`.
    pub fn x_size(&self) -> u64 {
        self.k11 + self.k10
    }

    /// `|Y| = |K11|`.
    pub fn y_size(&self) -> u64 {
        self.k11
    }

    pub fn get(&self, class: Class) -> u64 {
        match class {
            Class::K00 => self.k00,
            Class::K10 => self.k10,
            Class::K11 => self.k11,
        }
    }
}

/// On-disk shape of an instance: `{"n": .., "x": {..}, "y": {..}}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    n: u64,
    x: MembershipSpec,
    y: MembershipSpec,
}

/// A validated problem instance. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "InstanceFile", into = "InstanceFile")]
pub struct ProblemInstance {
    n: u64,
    x: MembershipSpec,
    y: MembershipSpec,
    counts: ClassCounts,
}

impl TryFrom<InstanceFile> for ProblemInstance {
    type Error = InstanceError;

    fn try_from(file: InstanceFile) -> Result<Self, Self::Error> {
        ProblemInstance::new(file.n, file.x, file.y)
    }
}

impl From<ProblemInstance> for InstanceFile {
    fn from(inst: ProblemInstance) -> Self {
        InstanceFile {
            n: inst.n,
            x: inst.x,
            y: inst.y,
        }
    }
}

impl ProblemInstance {
    /// Validates the descriptions and checks `∅ ≠ Y ⊆ X`.
    pub fn new(n: u64, x: MembershipSpec, y: MembershipSpec) -> Result<Self, InstanceError> {
        if n < 2 {
            return Err(InstanceError::TooSmall(n));
        }
        x.validate(n)?;
        y.validate(n)?;
        let x_size = x.count(n);
        let y_size = y.count(n);
        if y_size == 0 {
            return Err(InstanceError::EmptyY);
        }
        if x_size == 0 {
            return Err(InstanceError::EmptyX);
        }
        if y.subset_hint(&x, n) != Some(true) {
            if let Some(index) = y.iter(n).find(|&i| !x.contains(i)) {
                return Err(InstanceError::NotSubset { index });
            }
        }
        let counts = ClassCounts::new(y_size, x_size - y_size, n - x_size)?;
        Ok(ProblemInstance { n, x, y, counts })
    }

    /// Instance with `X = {0, .., |X|-1}` and `Y = {0, .., |Y|-1}`; only the
    /// class sizes matter to the simulators.
    pub fn from_sizes(n: u64, x_size: u64, y_size: u64) -> Result<Self, InstanceError> {
        let counts = ClassCounts::from_sizes(n, x_size, y_size)?;
        ProblemInstance::new(
            n,
            MembershipSpec::range(0, counts.x_size() - 1),
            MembershipSpec::range(0, counts.y_size() - 1),
        )
    }

    pub fn from_json(text: &str) -> Result<Self, InstanceFileError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, InstanceFileError> {
        let text = std::fs::read_to_string(path)?;
        ProblemInstance::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("instance serializes")
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn x_spec(&self) -> &MembershipSpec {
        &self.x
    }

    pub fn y_spec(&self) -> &MembershipSpec {
        &self.y
    }

    pub fn f_x(&self, i: u64) -> bool {
        i < self.n && self.x.contains(i)
    }

    pub fn f_y(&self, i: u64) -> bool {
        i < self.n && self.y.contains(i)
    }

    pub fn class_of(&self, i: u64) -> Class {
        match (self.f_x(i), self.f_y(i)) {
            (true, true) => Class::K11,
            (true, false) => Class::K10,
            _ => Class::K00,
        }
    }

    /// Sizes of `K11`, `K10`, `K00`.
    pub fn partition_classes(&self) -> ClassCounts {
        self.counts
    }

    /// Classical check of a measured index: one `f_X` and one `f_Y` evaluation.
    pub fn verify_outcome(&self, i: u64) -> Result<bool, InstanceError> {
        if i >= self.n {
            return Err(InstanceError::IndexOutOfRange {
                index: i,
                n: self.n,
            });
        }
        Ok(self.f_x(i) && self.f_y(i))
    }

    /// The `k`-th member of `class` (0-based, increasing order). Linear scan
    /// for the two complement classes.
    pub(crate) fn nth_in_class(&self, class: Class, k: u64) -> Option<u64> {
        match class {
            Class::K11 => self.y.nth(self.n, k),
            Class::K10 => self
                .x
                .iter(self.n)
                .filter(|&i| !self.y.contains(i))
                .nth(k as usize),
            Class::K00 => (0..self.n).filter(|&i| !self.x.contains(i)).nth(k as usize),
        }
    }
}

/// Failure to read an instance file.
#[derive(Debug, thiserror::Error)]
pub enum InstanceFileError {
    #[error("cannot read instance file: {0}")]
    Io(#[from] std::io::Error),
    #[error("invalid instance file: {0}")]
    Parse(#[from] serde_json::Error),
}
