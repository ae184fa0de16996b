//! The local definability criterion for relations over `ℕ^d`.
//!
//! A relation definable in `(ℕ, +, <)` looks the same almost everywhere: for
//! some shift bound `s`, every sufficiently deep cube of every radius can be
//! translated by a small nonzero shift without changing its membership
//! pattern. Muchnik's characterization turns this into a criterion: a
//! relation is definable iff all its sections are and such an `s` exists.
//!
//! This module provides the semantic side of that criterion (cube equality
//! via [`cubes_equal`], shifts via [`shifted_cube_equal`] and
//! [`s_shiftable`]) and the budgeted searches [`find_k`] (the least cube
//! radius witnessing non-shiftability at every depth) and [`find_c`] (the
//! lexicographically minimal witness corner at depth `t`). [`muchnik_test`]
//! combines them with a section scan into a three-valued definability test:
//! only semilinear inputs ever produce a definite "definable", so definite
//! verdicts stay sound under any budget.

use crate::periodicity::{
    minimal_period, PeriodicityCertificate, PeriodicityError, Set1D, WindowedSet,
};
use crate::relation::{Point, Relation, RelationError, ShiftVector};
use crate::verdict::{Budget, Exhaustion, StepCounter, Verdict3};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MuchnikError {
    #[error("shift {shift} applied to {x} leaves ℕ^d")]
    NegativeShiftTarget { x: Point, shift: ShiftVector },
    #[error(transparent)]
    Relation(#[from] RelationError),
    #[error(transparent)]
    Periodicity(#[from] PeriodicityError),
}

/// Do `x` and `y` carry the same membership pattern at radius `k`?
pub fn cubes_equal(rel: &Relation, x: &Point, y: &Point, k: u64) -> Result<bool, RelationError> {
    Ok(rel.cube_at(x, k)? == rel.cube_at(y, k)?)
}

/// Can the pair `(x, k)` be shifted by `r`, i.e. does `x + r` carry the same
/// cube? Errors when `x + r` has a negative coordinate.
pub fn shifted_cube_equal(
    rel: &Relation,
    r: &ShiftVector,
    k: u64,
    x: &Point,
) -> Result<bool, MuchnikError> {
    let y = x
        .translate(r)
        .ok_or_else(|| MuchnikError::NegativeShiftTarget {
            x: x.clone(),
            shift: r.clone(),
        })?;
    Ok(cubes_equal(rel, x, &y, k)?)
}

/// Is `(x, k)` s-shiftable: does some nonzero shift `r` with `max|r_i| <= s`
/// and `x + r ∈ ℕ^d` leave the cube unchanged?
///
/// The search is exhaustive over the `(2s+1)^d - 1` candidates. A candidate
/// whose target cube leaves the evaluation bound cannot witness either way;
/// if no in-bound candidate matches and some candidate was unevaluable, the
/// out-of-bound error is propagated rather than returning a silent `false`.
pub fn s_shiftable(rel: &Relation, s: u64, k: u64, x: &Point) -> Result<bool, RelationError> {
    assert!(s >= 1, "shift bound must be >= 1");
    let mut tester = ShiftTester::new(rel, s, k);
    tester.load_base(x.coords())?;
    match tester.shiftable(x.coords()) {
        ShiftOutcome::Shiftable => Ok(true),
        ShiftOutcome::NotShiftable => Ok(false),
        ShiftOutcome::Unevaluable(e) => Err(e),
    }
}

enum ShiftOutcome {
    Shiftable,
    NotShiftable,
    /// No candidate matched and at least one left the evaluation bound.
    Unevaluable(RelationError),
}

/// Scratch-buffer worker answering "is this point s-shiftable at radius k"
/// without allocating per query.
struct ShiftTester<'a> {
    rel: &'a Relation,
    dim: usize,
    s: u64,
    /// Cube offsets in code order, flattened.
    offsets: Vec<u64>,
    cells: usize,
    base: Vec<bool>,
    probe: Vec<u64>,
    target: Vec<u64>,
    shift: Vec<i64>,
}

impl<'a> ShiftTester<'a> {
    fn new(rel: &'a Relation, s: u64, k: u64) -> Self {
        let dim = rel.dimension();
        let mut offsets = Vec::new();
        let mut cells = 0;
        crate::relation::Cube::for_each_offset(k, dim, |off| {
            offsets.extend_from_slice(off);
            cells += 1;
        });
        ShiftTester {
            rel,
            dim,
            s,
            offsets,
            cells,
            base: vec![false; cells],
            probe: vec![0; dim],
            target: vec![0; dim],
            shift: vec![0; dim],
        }
    }

    /// Fills the base cube bits for the corner `x`.
    fn load_base(&mut self, x: &[u64]) -> Result<(), RelationError> {
        for cell in 0..self.cells {
            let off = &self.offsets[cell * self.dim..(cell + 1) * self.dim];
            for i in 0..self.dim {
                self.probe[i] = x[i] + off[i];
            }
            self.base[cell] = self.rel.contains_coords(&self.probe)?;
        }
        Ok(())
    }

    /// Runs the candidate-shift search; `load_base` must have been called for
    /// the same `x`.
    fn shiftable(&mut self, x: &[u64]) -> ShiftOutcome {
        let s = self.s as i64;
        self.shift.fill(-s);
        let mut first_error: Option<RelationError> = None;
        'candidates: loop {
            if self.shift.iter().any(|&d| d != 0) {
                // Target corner x + r, skipped when it leaves ℕ^d.
                let mut valid = true;
                for i in 0..self.dim {
                    let d = self.shift[i];
                    if d >= 0 {
                        self.target[i] = x[i] + d as u64;
                    } else {
                        match x[i].checked_sub(d.unsigned_abs()) {
                            Some(v) => self.target[i] = v,
                            None => {
                                valid = false;
                                break;
                            }
                        }
                    }
                }
                if valid {
                    let mut matched = true;
                    for cell in 0..self.cells {
                        let off = &self.offsets[cell * self.dim..(cell + 1) * self.dim];
                        for i in 0..self.dim {
                            self.probe[i] = self.target[i] + off[i];
                        }
                        match self.rel.contains_coords(&self.probe) {
                            Ok(bit) => {
                                if bit != self.base[cell] {
                                    matched = false;
                                    break;
                                }
                            }
                            Err(e) => {
                                if first_error.is_none() {
                                    first_error = Some(e);
                                }
                                matched = false;
                                break;
                            }
                        }
                    }
                    if matched {
                        return ShiftOutcome::Shiftable;
                    }
                }
            }
            // Advance the shift odometer over [-s, s]^d.
            for i in (0..self.dim).rev() {
                if self.shift[i] < s {
                    self.shift[i] += 1;
                    continue 'candidates;
                }
                self.shift[i] = -s;
            }
            break;
        }
        match first_error {
            Some(e) => ShiftOutcome::Unevaluable(e),
            None => ShiftOutcome::NotShiftable,
        }
    }
}

/// Resumable lexicographic search for non-shiftable corners.
///
/// Scans `[t, hi]^d` in lexicographic order (coordinate 0 most significant)
/// for points that are not s-shiftable at radius `k`. The scan region is
/// clamped so every candidate's shifted cubes stay inside the evaluation
/// bound. Calls must use non-decreasing `t`; work is shared across calls
/// because a point once proven shiftable stays shiftable.
pub(crate) struct CornerSearch<'a> {
    tester: ShiftTester<'a>,
    dim: usize,
    hi: Option<u64>,
    cursor: Option<Vec<u64>>,
    candidate: Vec<u64>,
    last_found: Option<Point>,
    budget: Budget,
}

impl<'a> CornerSearch<'a> {
    pub(crate) fn new(rel: &'a Relation, s: u64, k: u64, budget: &Budget) -> Self {
        // Safe region: the base cube and every candidate target cube must be
        // evaluable, so corners stay below bound - k - s.
        let hi = match rel.evaluation_bound() {
            Some(bound) => bound.checked_sub(k + s),
            None => Some(u64::MAX),
        }
        .map(|h| h.min(budget.coord_bound));
        let dim = rel.dimension();
        CornerSearch {
            tester: ShiftTester::new(rel, s, k),
            dim,
            hi,
            cursor: hi.map(|_| vec![0; dim]),
            candidate: Vec::with_capacity(dim),
            last_found: None,
            budget: budget.clone(),
        }
    }

    /// The lexicographically minimal point with `min(c) >= t` in the safe
    /// region that is not s-shiftable, resuming from previous calls.
    pub(crate) fn next_corner(&mut self, t: u64, steps: &mut StepCounter) -> Verdict3<Point> {
        let Some(hi) = self.hi else {
            return Verdict3::Unknown(Exhaustion::Budget(self.budget.clone()));
        };
        if t > hi {
            return Verdict3::Unknown(Exhaustion::Budget(self.budget.clone()));
        }
        // A corner found earlier stays minimal while it satisfies min >= t.
        if let Some(last) = &self.last_found {
            if last.min_coord() >= t {
                return Verdict3::Holds(last.clone());
            }
        }
        {
            let Some(cursor) = self.cursor.as_mut() else {
                return Verdict3::Unknown(Exhaustion::Budget(self.budget.clone()));
            };
            // Clamp the cursor up to the coordinate floor t: raising one digit
            // strictly increases the prefix, so the suffix resets to the
            // minimum. Points in between have a coordinate below t.
            for i in 0..self.dim {
                if cursor[i] < t {
                    for slot in cursor[i..].iter_mut() {
                        *slot = t;
                    }
                    break;
                }
            }
        }
        loop {
            if !steps.tick() {
                return Verdict3::Unknown(steps.exhaustion());
            }
            self.candidate.clear();
            self.candidate
                .extend_from_slice(self.cursor.as_ref().expect("cursor present"));
            if self.tester.load_base(&self.candidate).is_err() {
                // The safe region should prevent this; treat as exhausted.
                self.cursor = None;
                return Verdict3::Unknown(Exhaustion::Budget(self.budget.clone()));
            }
            let outcome = self.tester.shiftable(&self.candidate);
            let advanced = {
                let cursor = self.cursor.as_mut().expect("cursor present");
                advance_odometer(cursor, t, hi)
            };
            if !advanced {
                self.cursor = None;
            }
            match outcome {
                ShiftOutcome::NotShiftable => {
                    let point = Point::new(self.candidate.clone());
                    self.last_found = Some(point.clone());
                    return Verdict3::Holds(point);
                }
                ShiftOutcome::Shiftable | ShiftOutcome::Unevaluable(_) => {
                    if self.cursor.is_none() {
                        return Verdict3::Unknown(Exhaustion::Budget(self.budget.clone()));
                    }
                }
            }
        }
    }
}

/// Fresh corner search for the pipeline.
pub(crate) fn corner_search<'a>(
    rel: &'a Relation,
    s: u64,
    k: u64,
    budget: &Budget,
) -> CornerSearch<'a> {
    CornerSearch::new(rel, s, k, budget)
}

/// Lexicographic odometer over `[lo, hi]^d`; false when wrapped.
fn advance_odometer(coords: &mut [u64], lo: u64, hi: u64) -> bool {
    for i in (0..coords.len()).rev() {
        if coords[i] < hi {
            coords[i] += 1;
            return true;
        }
        coords[i] = lo;
    }
    false
}

/// The depth thresholds sampled when checking "for every t".
pub fn depth_samples(max_t: u64) -> Vec<u64> {
    let mut samples = vec![0, max_t / 4, max_t / 2, max_t];
    samples.dedup();
    samples
}

/// The minimal cube radius `K <= max_k` such that every sampled depth
/// threshold admits a non-s-shiftable corner, together with the corners.
///
/// `Holds` is an empirical verdict (finite depth sample, bounded region) and
/// the sample is part of the budget. Radii whose corner search exhausts the
/// region are rejected; hitting the step cap aborts with `Unknown` instead,
/// since minimality of a later radius could no longer be claimed.
pub fn find_k_evidence(
    rel: &Relation,
    s: u64,
    budget: &Budget,
) -> Verdict3<(u64, Vec<(u64, Point)>)> {
    let mut memo = vec![false; budget.max_k as usize + 1];
    find_k_with_memo(rel, s, budget, &mut memo)
}

/// `rejected[k]` records radii whose search region was exhausted without a
/// corner at some shift bound <= s. Shiftability is monotone in the shift
/// bound and the safe region shrinks with it, so such radii stay empty for
/// every larger bound and need not be rescanned.
fn find_k_with_memo(
    rel: &Relation,
    s: u64,
    budget: &Budget,
    rejected: &mut [bool],
) -> Verdict3<(u64, Vec<(u64, Point)>)> {
    let samples = depth_samples(budget.max_t);
    let mut steps = StepCounter::new(budget.step_limit);
    for k in 0..=budget.max_k {
        if rejected[k as usize] {
            continue;
        }
        let mut search = CornerSearch::new(rel, s, k, budget);
        let mut corners = Vec::with_capacity(samples.len());
        let mut this_rejected = false;
        for &t in &samples {
            match search.next_corner(t, &mut steps) {
                Verdict3::Holds(c) => corners.push((t, c)),
                Verdict3::Unknown(e @ Exhaustion::Steps { .. }) => return Verdict3::Unknown(e),
                Verdict3::Unknown(_) | Verdict3::Fails => {
                    rejected[k as usize] = true;
                    this_rejected = true;
                    break;
                }
            }
        }
        if !this_rejected {
            return Verdict3::Holds((k, corners));
        }
    }
    Verdict3::Unknown(Exhaustion::Budget(budget.clone()))
}

/// The minimal cube radius, without the witnessing corners.
pub fn find_k(rel: &Relation, s: u64, budget: &Budget) -> Verdict3<u64> {
    find_k_evidence(rel, s, budget).map(|(k, _)| k)
}

/// The lexicographically minimal corner `C` with `min(C) >= t` that is not
/// s-shiftable at the radius established by [`find_k`].
pub fn find_c(rel: &Relation, s: u64, t: u64, budget: &Budget) -> Verdict3<Point> {
    let k = match find_k(rel, s, budget) {
        Verdict3::Holds(k) => k,
        Verdict3::Fails => return Verdict3::Fails,
        Verdict3::Unknown(e) => return Verdict3::Unknown(e),
    };
    let mut steps = StepCounter::new(budget.step_limit);
    CornerSearch::new(rel, s, k, budget).next_corner(t, &mut steps)
}

/// Evidence returned by a `Holds` of [`muchnik_test`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Evidence {
    /// Dimension 1: the sampled window is not ultimately periodic.
    NotPeriodic1D {
        certificate: PeriodicityCertificate,
    },
    /// Property (a): the section at `x_index = value` is judged
    /// non-definable, with the recursive evidence.
    Section {
        index: usize,
        value: u64,
        inner: Box<Evidence>,
    },
    /// Property (b): for every examined shift bound, a cube radius and
    /// corners at every sampled depth that no small shift preserves.
    Local { rows: Vec<LocalEvidence> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalEvidence {
    pub s: u64,
    pub k: u64,
    pub corners: Vec<(u64, Point)>,
}

impl Evidence {
    pub fn property_name(&self) -> &'static str {
        match self {
            Evidence::NotPeriodic1D { .. } => "not-periodic",
            Evidence::Section { .. } => "(a) section",
            Evidence::Local { .. } => "(b) local",
        }
    }
}

impl fmt::Display for Evidence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Evidence::NotPeriodic1D { certificate } => {
                write!(f, "window not ultimately periodic: {certificate}")
            }
            Evidence::Section {
                index,
                value,
                inner,
            } => {
                writeln!(f, "property: (a) section")?;
                writeln!(f, "section: index={index} value={value}")?;
                write!(f, "section-evidence: {inner}")
            }
            Evidence::Local { rows } => {
                writeln!(f, "property: (b) local")?;
                for row in rows {
                    write!(f, "s={} K={} corners:", row.s, row.k)?;
                    for (t, c) in &row.corners {
                        write!(f, " t={t} -> {c};")?;
                    }
                    writeln!(f)?;
                }
                Ok(())
            }
        }
    }
}

/// How the section scan judged one section.
enum SectionJudgment {
    NonDefinable(Evidence),
    LooksDefinable,
    Unresolved,
}

fn judge_section(rel: &Relation, budget: &Budget) -> Result<SectionJudgment, MuchnikError> {
    if rel.dimension() == 1 {
        let window = budget
            .window
            .min(rel.evaluation_bound().unwrap_or(budget.window));
        if window < 9 {
            return Ok(SectionJudgment::Unresolved);
        }
        let sampled = WindowedSet::from_relation(rel, window)?;
        let certificate = minimal_period(&Set1D::Windowed(sampled.clone()))?;
        if certificate.is_periodic() {
            return Ok(SectionJudgment::LooksDefinable);
        }
        // A constant tail over the last third means the window is consistent
        // with a finite or cofinite set, which is definable; the certificate
        // only failed because the threshold cap could not reach that far.
        let tail_start = 2 * window / 3;
        let first = sampled.member(tail_start);
        if (tail_start..=window).all(|n| sampled.member(n) == first) {
            return Ok(SectionJudgment::LooksDefinable);
        }
        Ok(SectionJudgment::NonDefinable(Evidence::NotPeriodic1D {
            certificate,
        }))
    } else {
        let reduced = Budget {
            window: (budget.window / 2).max(9),
            section_scan: (budget.section_scan / 2).max(1),
            ..budget.clone()
        };
        match muchnik_test(rel, &reduced)? {
            Verdict3::Holds(ev) => Ok(SectionJudgment::NonDefinable(ev)),
            Verdict3::Fails => Ok(SectionJudgment::LooksDefinable),
            Verdict3::Unknown(_) => Ok(SectionJudgment::Unresolved),
        }
    }
}

/// The lexicographically least `(index, value)` whose section is judged
/// non-definable within the section-scan budget, with the judging evidence.
pub fn first_non_definable_section(
    rel: &Relation,
    budget: &Budget,
) -> Result<Option<(usize, u64, Evidence)>, MuchnikError> {
    let value_cap = budget
        .section_scan
        .min(rel.evaluation_bound().unwrap_or(budget.section_scan));
    for index in 0..rel.dimension() {
        for value in 0..=value_cap {
            let section = rel.section(index, value)?;
            if let SectionJudgment::NonDefinable(inner) = judge_section(&section, budget)? {
                return Ok(Some((index, value, inner)));
            }
        }
    }
    Ok(None)
}

/// Three-valued definability test.
///
/// `Fails` means definable and is only produced for semilinear inputs, which
/// are definable by construction. `Holds(evidence)` reports either a section
/// judged non-definable (property (a), explored in lexicographic order of
/// `(index, value)`) or, for every shift bound `s <= max_s`, a cube radius
/// and witness corners at every sampled depth (property (b)). Everything
/// else is `Unknown`: budget exhaustion never produces a definite verdict
/// for tables or oracles.
pub fn muchnik_test(rel: &Relation, budget: &Budget) -> Result<Verdict3<Evidence>, MuchnikError> {
    if rel.is_semilinear() {
        return Ok(Verdict3::Fails);
    }
    if rel.dimension() == 1 {
        return Ok(match judge_section(rel, budget)? {
            SectionJudgment::NonDefinable(ev) => Verdict3::Holds(ev),
            _ => Verdict3::Unknown(Exhaustion::Window {
                window: budget.window,
            }),
        });
    }

    // Property (a): scan sections in lexicographic order of (index, value).
    if let Some((index, value, inner)) = first_non_definable_section(rel, budget)? {
        return Ok(Verdict3::Holds(Evidence::Section {
            index,
            value,
            inner: Box::new(inner),
        }));
    }

    // Property (b): every shift bound must yield a radius and corner family.
    let mut rows = Vec::with_capacity(budget.max_s as usize);
    let mut rejected_radii = vec![false; budget.max_k as usize + 1];
    for s in 1..=budget.max_s {
        match find_k_with_memo(rel, s, budget, &mut rejected_radii) {
            Verdict3::Holds((k, corners)) => rows.push(LocalEvidence { s, k, corners }),
            Verdict3::Fails => unreachable!("radius search never definitively fails"),
            Verdict3::Unknown(e) => return Ok(Verdict3::Unknown(e)),
        }
    }
    Ok(Verdict3::Holds(Evidence::Local { rows }))
}
