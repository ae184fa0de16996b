//! Ultimate-periodicity certificates for one-dimensional sets, the
//! common-period witness stream, and expanding-set checks.
//!
//! A set `S ⊆ ℕ` is *ultimately p-periodic* when beyond some threshold `t`
//! membership of `n` depends only on `(n - t) mod p`. Certificates are exact
//! for sets given in explicit periodic form and empirical for sets sampled
//! through a window `[0, B]`; empirical verdicts always record the window.
//!
//! The windowed consistency rule requires a candidate period to be witnessed
//! over at least two full periods beyond the threshold: both the period and
//! the threshold must fit below `B/3`.

use crate::relation::{Point, Relation, RelationError};
use crate::verdict::{Exhaustion, Verdict3};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PeriodicityError {
    #[error("window {window} is too small (need at least {need})")]
    WindowTooSmall { window: u64, need: u64 },
    #[error("expected a relation of dimension 1, got {got}")]
    NotOneDimensional { got: usize },
    #[error("window {window} exceeds the relation's evaluation bound {bound}")]
    WindowBeyondBound { window: u64, bound: u64 },
    #[error(transparent)]
    Relation(#[from] RelationError),
}

/// A set given in explicitly periodic form: arbitrary `prefix` bits below the
/// threshold, then the `residue` pattern repeating forever.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactPeriodic {
    prefix: Vec<bool>,
    residue: Vec<bool>,
}

impl ExactPeriodic {
    pub fn new(prefix: Vec<bool>, residue: Vec<bool>) -> Self {
        assert!(!residue.is_empty(), "period must be >= 1");
        ExactPeriodic { prefix, residue }
    }

    pub fn threshold(&self) -> u64 {
        self.prefix.len() as u64
    }

    pub fn period(&self) -> u64 {
        self.residue.len() as u64
    }

    pub fn member(&self, n: u64) -> bool {
        let t = self.prefix.len() as u64;
        if n < t {
            self.prefix[n as usize]
        } else {
            self.residue[((n - t) % self.period()) as usize]
        }
    }

    fn residue_bit(&self, i: usize) -> bool {
        self.residue[i]
    }

    /// Tabulates the first `window + 1` membership bits.
    pub fn window_bits(&self, window: u64) -> WindowedSet {
        WindowedSet {
            bits: (0..=window).map(|n| self.member(n)).collect(),
        }
    }
}

/// Membership bits of a set sampled on `[0, B]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowedSet {
    bits: Vec<bool>,
}

impl WindowedSet {
    pub fn from_bits(bits: Vec<bool>) -> Self {
        assert!(!bits.is_empty());
        WindowedSet { bits }
    }

    /// Samples a one-dimensional relation on `[0, window]`.
    pub fn from_relation(rel: &Relation, window: u64) -> Result<Self, PeriodicityError> {
        if rel.dimension() != 1 {
            return Err(PeriodicityError::NotOneDimensional {
                got: rel.dimension(),
            });
        }
        if let Some(bound) = rel.evaluation_bound() {
            if window > bound {
                return Err(PeriodicityError::WindowBeyondBound { window, bound });
            }
        }
        let mut bits = Vec::with_capacity(window as usize + 1);
        for n in 0..=window {
            bits.push(rel.contains_coords(&[n])?);
        }
        Ok(WindowedSet { bits })
    }

    /// The window `[0, B]` holding the listed values.
    pub fn from_values(values: &[u64], window: u64) -> Self {
        let mut bits = vec![false; window as usize + 1];
        for &v in values {
            if v <= window {
                bits[v as usize] = true;
            }
        }
        WindowedSet { bits }
    }

    pub fn window(&self) -> u64 {
        self.bits.len() as u64 - 1
    }

    pub fn member(&self, n: u64) -> bool {
        self.bits[n as usize]
    }

    /// The members in increasing order.
    pub fn values(&self) -> Vec<u64> {
        self.bits
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| b.then_some(i as u64))
            .collect()
    }

    /// The least `n >= t` with `bit(n) != bit(n + p)`, if any.
    fn first_contradiction(&self, t: u64, p: u64) -> Option<u64> {
        let window = self.window();
        if window < p {
            return None;
        }
        (t..=window - p).find(|&n| self.member(n) != self.member(n + p))
    }
}

/// A one-dimensional set under one of the two presentations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Set1D {
    Exact(ExactPeriodic),
    Windowed(WindowedSet),
}

impl Set1D {
    pub fn member(&self, n: u64) -> bool {
        match self {
            Set1D::Exact(e) => e.member(n),
            Set1D::Windowed(w) => w.member(n),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertVerdict {
    /// Exact input, exact minimal parameters.
    Proven,
    /// Minimal parameters consistent with the window.
    Empirical { window: u64 },
    /// No admissible parameters fit the window.
    NotPeriodic { window: u64 },
}

/// `(threshold, period, verdict)` for a one-dimensional set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PeriodicityCertificate {
    pub threshold: u64,
    pub period: u64,
    pub verdict: CertVerdict,
}

impl PeriodicityCertificate {
    pub fn is_periodic(&self) -> bool {
        !matches!(self.verdict, CertVerdict::NotPeriodic { .. })
    }
}

impl fmt::Display for PeriodicityCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (verdict, window) = match self.verdict {
            CertVerdict::Proven => ("proven", 0),
            CertVerdict::Empirical { window } => ("empirical", window),
            CertVerdict::NotPeriodic { window } => ("not-periodic", window),
        };
        write!(
            f,
            "UP t={} p={} verdict={} B={}",
            self.threshold, self.period, verdict, window
        )
    }
}

/// The minimal `(period, threshold)` certificate, ordered by period first.
///
/// Exact inputs get the true minimum. Windowed inputs get the minimal pair
/// with `p <= B/3` and `t <= B/3` consistent on the window, or
/// `NotPeriodic(B)` when no such pair exists. Windows must span at least 9.
pub fn minimal_period(set: &Set1D) -> Result<PeriodicityCertificate, PeriodicityError> {
    match set {
        Set1D::Exact(exact) => {
            let (threshold, period) = exact_minimal(exact);
            Ok(PeriodicityCertificate {
                threshold,
                period,
                verdict: CertVerdict::Proven,
            })
        }
        Set1D::Windowed(w) => {
            let window = w.window();
            if window < 9 {
                return Err(PeriodicityError::WindowTooSmall { window, need: 9 });
            }
            let cap = window / 3;
            for p in 1..=cap {
                let mut t = 0;
                while t <= cap {
                    match w.first_contradiction(t, p) {
                        None => {
                            return Ok(PeriodicityCertificate {
                                threshold: t,
                                period: p,
                                verdict: CertVerdict::Empirical { window },
                            })
                        }
                        // Any threshold at or below the contradiction fails too.
                        Some(n) => t = n + 1,
                    }
                }
            }
            Ok(PeriodicityCertificate {
                threshold: 0,
                period: 0,
                verdict: CertVerdict::NotPeriodic { window },
            })
        }
    }
}

/// True minimal `(t, p)` of an exactly periodic set. Candidate periods are
/// scanned from 1 regardless of divisibility; the residue test is rotation
/// invariance, the threshold test walks the prefix backwards.
fn exact_minimal(exact: &ExactPeriodic) -> (u64, u64) {
    let declared_p = exact.period();
    let mut best_p = declared_p;
    for p in 1..declared_p {
        let rot = (p % declared_p) as usize;
        let n = declared_p as usize;
        let residue_ok = (0..n).all(|i| exact.residue_bit(i) == exact.residue_bit((i + rot) % n));
        if residue_ok {
            best_p = p;
            break;
        }
    }
    // Minimal threshold for best_p: extend periodicity into the prefix.
    let mut t = exact.threshold();
    while t > 0 && exact.member(t - 1) == exact.member(t - 1 + best_p) {
        t -= 1;
    }
    (t, best_p)
}

/// Is the set ultimately `p`-periodic, judged on the window `[0, B]`?
///
/// `Holds(t)` when some threshold `t <= B/3` makes the window consistent;
/// `Fails` when every threshold up to `B - p` is contradicted inside the
/// window; `Unknown` otherwise. Exact inputs are decided exactly.
pub fn is_ultimately_p_periodic(set: &Set1D, p: u64, window: u64) -> Verdict3<u64> {
    assert!(p >= 1, "period must be >= 1");
    match set {
        Set1D::Exact(exact) => {
            let n = exact.period() as usize;
            let rot = (p % exact.period()) as usize;
            let residue_ok =
                (0..n).all(|i| exact.residue_bit(i) == exact.residue_bit((i + rot) % n));
            if residue_ok {
                let mut t = exact.threshold();
                while t > 0 && exact.member(t - 1) == exact.member(t - 1 + p) {
                    t -= 1;
                }
                Verdict3::Holds(t)
            } else {
                Verdict3::Fails
            }
        }
        Set1D::Windowed(w) => {
            let window = window.min(w.window());
            if window < p {
                return Verdict3::Unknown(Exhaustion::Window { window });
            }
            let cap = window / 3;
            let mut t = 0;
            while t <= cap {
                match w.first_contradiction(t, p) {
                    None => return Verdict3::Holds(t),
                    Some(n) => t = n + 1,
                }
            }
            // No admissible threshold; a definite failure needs every
            // threshold up to window - p contradicted.
            while t <= window - p {
                match w.first_contradiction(t, p) {
                    None => return Verdict3::Unknown(Exhaustion::Window { window }),
                    Some(n) => t = n + 1,
                }
            }
            Verdict3::Fails
        }
    }
}

/// Row `i` of a two-dimensional family: `{m | (i, m) ∈ F}` on `[0, window]`.
pub fn family_row(family: &Relation, i: u64, window: u64) -> Result<WindowedSet, PeriodicityError> {
    if family.dimension() != 2 {
        return Err(PeriodicityError::NotOneDimensional {
            got: family.dimension(),
        });
    }
    let mut bits = Vec::with_capacity(window as usize + 1);
    for m in 0..=window {
        bits.push(family.contains(&Point::new(vec![i, m]))?);
    }
    Ok(WindowedSet { bits })
}

/// The minimal `q >= 1` such that every row `i <= n` of the family is
/// ultimately `q`-periodic on the window. When the window verdicts are exact
/// this equals the lcm of the rows' minimal periods.
pub fn minimal_common_period(
    family: &Relation,
    n: u64,
    window: u64,
) -> Result<Verdict3<u64>, PeriodicityError> {
    let rows: Vec<Set1D> = (0..=n)
        .map(|i| family_row(family, i, window).map(Set1D::Windowed))
        .collect::<Result<_, _>>()?;
    let cap = window / 3;
    for q in 1..=cap {
        let all = rows
            .iter()
            .all(|row| is_ultimately_p_periodic(row, q, window).is_holds());
        if all {
            return Ok(Verdict3::Holds(q));
        }
    }
    Ok(Verdict3::Unknown(Exhaustion::Window { window }))
}

/// Which construction produced a witness stream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    /// Common-period values of a family of ultimately periodic rows.
    LcmConstruction,
    /// Norms of witness corners at a fixed shift bound.
    DirectNorms { s: u64 },
    /// Witness of the section at `x_index = value`, lifted to the parent.
    SectionRecursion { index: usize, value: u64 },
    /// A one-dimensional relation enumerated directly.
    Relation1D,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::LcmConstruction => write!(f, "lcm-construction"),
            Provenance::DirectNorms { s } => write!(f, "direct-norms s={s}"),
            Provenance::SectionRecursion { index, value } => {
                write!(f, "section-recursion i={index} j={value}")
            }
            Provenance::Relation1D => write!(f, "relation-1d"),
        }
    }
}

/// A strictly increasing stream of naturals with the provenance of the
/// construction that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessStream {
    pub values: Vec<u64>,
    pub provenance: Provenance,
    pub exhausted: Option<Exhaustion>,
}

impl WitnessStream {
    pub fn new(values: Vec<u64>, provenance: Provenance, exhausted: Option<Exhaustion>) -> Self {
        assert!(
            values.windows(2).all(|w| w[0] < w[1]),
            "witness streams are strictly increasing"
        );
        WitnessStream {
            values,
            provenance,
            exhausted,
        }
    }
}

/// The stream of minimal common periods `q_n` of the first `n+1` rows, for
/// `n = 0, 1, ...`, deduplicated, until `count` distinct values are produced
/// or a row verdict goes unknown.
pub fn lcm_witness(
    family: &Relation,
    count: usize,
    window: u64,
) -> Result<WitnessStream, PeriodicityError> {
    let mut values: Vec<u64> = Vec::new();
    let mut exhausted = None;
    let row_limit = family.evaluation_bound().unwrap_or(window).min(window);
    let mut n = 0;
    while values.len() < count && n <= row_limit {
        match minimal_common_period(family, n, window)? {
            Verdict3::Holds(q) => {
                if values.last() != Some(&q) {
                    values.push(q);
                }
            }
            Verdict3::Fails => unreachable!("common-period search never fails definitively"),
            Verdict3::Unknown(e) => {
                exhausted = Some(e);
                break;
            }
        }
        n += 1;
    }
    if values.len() < count && exhausted.is_none() {
        exhausted = Some(Exhaustion::Window { window });
    }
    Ok(WitnessStream::new(
        values,
        Provenance::LcmConstruction,
        exhausted,
    ))
}

/// Tunable thresholds for the expanding-set check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExpandingConfig {
    /// Number of nested geometric sub-windows whose gap maxima must strictly
    /// increase for a `Holds` verdict.
    pub subwindows: u32,
    /// How many times the overall maximal gap must repeat for a `Fails`.
    pub repetitions: u32,
}

impl Default for ExpandingConfig {
    fn default() -> Self {
        ExpandingConfig {
            subwindows: 3,
            repetitions: 10,
        }
    }
}

/// Evidence for an empirical `Holds` of the expanding check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpandingEvidence {
    pub window: u64,
    /// Max gap inside `[0, B/2^(subwindows-1)], ..., [0, B/2], [0, B]`,
    /// counting the pending gap from the last element to the window end.
    pub gap_maxima: Vec<u64>,
}

/// Is the distance between successive members unbounded, judged on `[0, B]`?
///
/// `Holds` when the maximal gap over the nested windows `[0, B/2^j]` strictly
/// increases as the window doubles (the gap from the last member to the
/// window end counts as a pending lower bound). `Fails` when the maximal gap
/// repeats at least `repetitions` times with no later exceedance. `Unknown`
/// otherwise.
pub fn is_expanding(
    set: &Set1D,
    window: u64,
    cfg: &ExpandingConfig,
) -> Verdict3<ExpandingEvidence> {
    let members: Vec<u64> = (0..=window).filter(|&n| set.member(n)).collect();
    if members.len() < 2 || cfg.subwindows < 2 {
        return Verdict3::Unknown(Exhaustion::Window { window });
    }

    let max_gap_within = |end: u64| -> u64 {
        let mut max = 0u64;
        let mut last: Option<u64> = None;
        for &m in members.iter().take_while(|&&m| m <= end) {
            if let Some(prev) = last {
                max = max.max(m - prev);
            }
            last = Some(m);
        }
        if let Some(prev) = last {
            max = max.max(end - prev);
        }
        max
    };

    let mut maxima = Vec::with_capacity(cfg.subwindows as usize);
    for j in (0..cfg.subwindows).rev() {
        maxima.push(max_gap_within(window >> j));
    }
    if maxima.windows(2).all(|w| w[0] < w[1]) && maxima[0] > 0 {
        return Verdict3::Holds(ExpandingEvidence {
            window,
            gap_maxima: maxima,
        });
    }

    // Bounded-gap evidence: the overall maximal achieved gap repeats often
    // and the pending tail does not exceed it.
    let gaps: Vec<u64> = members.windows(2).map(|w| w[1] - w[0]).collect();
    let pending = window - members.last().expect("nonempty");
    if let Some(&gmax) = gaps.iter().max() {
        let reps = gaps.iter().filter(|&&g| g == gmax).count() as u32;
        if reps >= cfg.repetitions && pending <= gmax {
            return Verdict3::Fails;
        }
    }
    Verdict3::Unknown(Exhaustion::Window { window })
}
