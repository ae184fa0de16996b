//! Three-valued verdicts for budgeted searches.
//!
//! Every search in this library that stands in for an unbounded quantifier
//! returns a [`Verdict3`]: a definite `Holds` or `Fails`, or `Unknown`
//! stamped with the budget that ran out. Definite verdicts are monotone
//! under budget growth: enlarging a budget may turn `Unknown` into a
//! definite answer but never flips `Holds` to `Fails` or back.

use std::fmt;

/// Search budgets. All fields are at least 1 (enforced by [`Budget::validated`]).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Budget {
    /// Largest cube radius tried by the cube-size search.
    pub max_k: u64,
    /// Largest shift bound examined by the definability test.
    pub max_s: u64,
    /// Largest depth threshold sampled when checking "for every t".
    pub max_t: u64,
    /// Coordinate ceiling for corner searches.
    pub coord_bound: u64,
    /// Window for one-dimensional periodicity evidence and section scans.
    pub window: u64,
    /// How many values of a fixed coordinate the section scan explores.
    pub section_scan: u64,
    /// Recurrence count that stands in for "appears infinitely often".
    pub theta: u64,
    /// Cap on lattice points examined by a single corner search.
    pub step_limit: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_k: 3,
            max_s: 4,
            max_t: 32,
            coord_bound: 2_000,
            window: 1_000,
            section_scan: 16,
            theta: 3,
            step_limit: 4_000_000_000,
        }
    }
}

impl Budget {
    /// Checks the "all fields >= 1" invariant.
    pub fn validated(self) -> Result<Budget, String> {
        let fields = [
            ("max-k", self.max_k),
            ("max-s", self.max_s),
            ("max-t", self.max_t),
            ("coord-bound", self.coord_bound),
            ("window", self.window),
            ("section-scan", self.section_scan),
            ("theta", self.theta),
            ("step-limit", self.step_limit),
        ];
        for (name, value) in fields {
            if value == 0 {
                return Err(format!("budget field {name} must be >= 1"));
            }
        }
        Ok(self)
    }
}

impl fmt::Display for Budget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "max-k={} max-s={} max-t={} coord-bound={} window={} section-scan={} theta={} step-limit={}",
            self.max_k,
            self.max_s,
            self.max_t,
            self.coord_bound,
            self.window,
            self.section_scan,
            self.theta,
            self.step_limit
        )
    }
}

/// What a search ran out of when it returned `Unknown`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Exhaustion {
    /// The structured search budget was exhausted.
    Budget(Budget),
    /// A one-dimensional window was too small to decide.
    Window { window: u64 },
    /// The per-search step cap was hit.
    Steps { limit: u64 },
}

impl fmt::Display for Exhaustion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exhaustion::Budget(b) => write!(f, "budget exhausted ({b})"),
            Exhaustion::Window { window } => write!(f, "window {window} exhausted"),
            Exhaustion::Steps { limit } => write!(f, "step limit {limit} exhausted"),
        }
    }
}

/// `Holds(T)` / `Fails` / `Unknown(budget)`: the return shape of every
/// semi-decidable search in the library.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict3<T> {
    Holds(T),
    Fails,
    Unknown(Exhaustion),
}

impl<T> Verdict3<T> {
    pub fn is_holds(&self) -> bool {
        matches!(self, Verdict3::Holds(_))
    }

    pub fn is_fails(&self) -> bool {
        matches!(self, Verdict3::Fails)
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, Verdict3::Unknown(_))
    }

    pub fn holds_value(&self) -> Option<&T> {
        match self {
            Verdict3::Holds(v) => Some(v),
            _ => None,
        }
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Verdict3<U> {
        match self {
            Verdict3::Holds(v) => Verdict3::Holds(f(v)),
            Verdict3::Fails => Verdict3::Fails,
            Verdict3::Unknown(e) => Verdict3::Unknown(e),
        }
    }
}

impl<T: fmt::Display> fmt::Display for Verdict3<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict3::Holds(v) => write!(f, "holds({v})"),
            Verdict3::Fails => write!(f, "fails"),
            Verdict3::Unknown(e) => write!(f, "unknown: {e}"),
        }
    }
}

/// Decrementing step counter shared by the scan loops.
#[derive(Debug)]
pub(crate) struct StepCounter {
    remaining: u64,
    limit: u64,
}

impl StepCounter {
    pub(crate) fn new(limit: u64) -> Self {
        StepCounter {
            remaining: limit,
            limit,
        }
    }

    /// Returns false when the cap is hit.
    pub(crate) fn tick(&mut self) -> bool {
        if self.remaining == 0 {
            return false;
        }
        self.remaining -= 1;
        true
    }

    pub(crate) fn exhaustion(&self) -> Exhaustion {
        Exhaustion::Steps { limit: self.limit }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn budget_validation() {
        assert!(Budget::default().validated().is_ok());
        let bad = Budget {
            theta: 0,
            ..Budget::default()
        };
        assert!(bad.validated().is_err());
    }

    #[test]
    fn verdict_display() {
        let v: Verdict3<u64> = Verdict3::Holds(3);
        assert_eq!(v.to_string(), "holds(3)");
        let v: Verdict3<u64> = Verdict3::Unknown(Exhaustion::Window { window: 9 });
        assert_eq!(v.to_string(), "unknown: window 9 exhausted");
    }
}
