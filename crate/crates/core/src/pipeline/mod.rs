//! The witness pipeline: from a relation judged non-definable to a strictly
//! increasing stream of naturals that is not ultimately periodic.
//!
//! For dimension 1 the relation itself is the witness. Otherwise the
//! pipeline first looks for a section judged non-definable and recurses on
//! the lexicographically least one. Failing that, for each shift bound `s`
//! it computes the witness corners `c(s, t)`, restricts the depth thresholds
//! to a set `T` on which every corner coordinate strictly increases, finds
//! the cube pattern that recurs along `T`, and collects the norms of the
//! corners carrying that pattern. The first `s` whose norm set resists a
//! periodicity certificate yields the witness directly; if every norm set
//! looks periodic, their family feeds the common-period construction
//! instead.
//!
//! Every intermediate is recorded in a [`PipelineTrace`], so each witness
//! value can be reproduced from the trace alone.

mod divergent;

pub use divergent::{increasing_restriction, DivergentFunction};

use crate::muchnik::{find_k_evidence, first_non_definable_section, MuchnikError};
use crate::periodicity::{
    minimal_period, lcm_witness, CertVerdict, PeriodicityCertificate, PeriodicityError,
    Provenance, Set1D, WindowedSet, WitnessStream,
};
use crate::relation::{Cube, Point, Relation, RelationError};
use crate::verdict::{Budget, Exhaustion, StepCounter, Verdict3};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("the relation is semilinear, hence definable; no witness exists")]
    DefinableInput,
    #[error("the increasing restriction confirmed no index within window {window}")]
    EmptyRestriction { window: u64 },
    #[error("divergence modulus is unsound: claims values above {value} hold from {at}")]
    InvalidModulus { value: u64, at: u64 },
    #[error("pipeline could not commit to a branch: {0}")]
    Unresolved(Exhaustion),
    #[error(transparent)]
    Relation(#[from] RelationError),
    #[error(transparent)]
    Periodicity(#[from] PeriodicityError),
    #[error(transparent)]
    Muchnik(#[from] MuchnikError),
}

/// Which construction the pipeline committed to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Branch {
    /// Dimension 1: the relation is its own witness.
    Base1D,
    /// A section was judged non-definable; the witness is the section's.
    SectionRecursion { index: usize, value: u64 },
    /// The norm set at this shift bound is itself non-periodic.
    DirectNorms { s: u64 },
    /// All norm sets looked periodic; their family fed the common-period
    /// construction.
    LcmOverS,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Branch::Base1D => write!(f, "base-1d"),
            Branch::SectionRecursion { index, value } => {
                write!(f, "section-recursion i={index} j={value}")
            }
            Branch::DirectNorms { s } => write!(f, "direct-norms s={s}"),
            Branch::LcmOverS => write!(f, "lcm-over-s"),
        }
    }
}

/// Intermediates recorded for one shift bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SRecord {
    pub s: u64,
    pub k: u64,
    /// Confirmed indices of the increasing restriction.
    pub t_prefix: Vec<u64>,
    /// The witness corner at each confirmed index.
    pub corners: Vec<(u64, Point)>,
    /// Index and pattern of the recurring cube.
    pub recurring: Option<(u64, Cube)>,
    /// Indices whose cube equals the recurring pattern.
    pub x_prefix: Vec<u64>,
    /// Norms of the corners at `x_prefix`.
    pub norms: Vec<u64>,
    /// Periodicity certificate of the norm set, on its natural window.
    pub certificate: Option<PeriodicityCertificate>,
}

/// The full trace of one pipeline run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PipelineTrace {
    pub branch: Branch,
    pub per_s: Vec<SRecord>,
    pub witness: WitnessStream,
    /// Trace of the recursive run, for the section branch.
    pub inner: Option<Box<PipelineTrace>>,
}

impl PipelineTrace {
    /// Machine-readable line format.
    pub fn lines(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("branch={}\n", self.branch));
        for rec in &self.per_s {
            let cube = rec
                .recurring
                .as_ref()
                .map(|(_, c)| c.mask_hex())
                .unwrap_or_else(|| "-".into());
            out.push_str(&format!(
                "s={} K={} I={} T={} X={} N={}\n",
                rec.s,
                rec.k,
                cube,
                list(&rec.t_prefix),
                list(&rec.x_prefix),
                list(&rec.norms),
            ));
        }
        out.push_str(&format!(
            "witness={} provenance={}\n",
            list(&self.witness.values),
            self.witness.provenance
        ));
        if let Some(inner) = &self.inner {
            out.push_str(&inner.lines());
        }
        out
    }
}

fn list(values: &[u64]) -> String {
    let mut out = String::from("[");
    for (i, v) in values.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(&v.to_string());
    }
    out.push(']');
    out
}

impl fmt::Display for PipelineTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "branch: {}", self.branch)?;
        for rec in &self.per_s {
            write!(f, "s={} K={}", rec.s, rec.k)?;
            match &rec.recurring {
                Some((idx, cube)) => write!(f, " f-index={idx} I={cube}")?,
                None => write!(f, " recurring-cube=unresolved")?,
            }
            writeln!(f)?;
            writeln!(f, "  T={}", list(&rec.t_prefix))?;
            writeln!(f, "  X={}", list(&rec.x_prefix))?;
            writeln!(f, "  N={}", list(&rec.norms))?;
            if let Some(cert) = &rec.certificate {
                writeln!(f, "  certificate: {cert}")?;
            }
        }
        writeln!(
            f,
            "witness ({}): {}",
            self.witness.provenance,
            list(&self.witness.values)
        )?;
        if let Some(exhausted) = &self.witness.exhausted {
            writeln!(f, "witness exhausted: {exhausted}")?;
        }
        if let Some(inner) = &self.inner {
            writeln!(f, "-- inner trace --")?;
            write!(f, "{inner}")?;
        }
        Ok(())
    }
}

/// Computes corners, restriction, recurring cube and norms for one `s`.
///
/// The depth range scanned is `2*count + theta`: enough confirmed indices to
/// produce `count` norms for patterns that recur at every other index.
fn norm_pipeline(
    rel: &Relation,
    s: u64,
    budget: &Budget,
    count: usize,
) -> Result<SRecord, PipelineError> {
    let (k, _) = match find_k_evidence(rel, s, budget) {
        Verdict3::Holds(v) => v,
        Verdict3::Fails => return Err(PipelineError::DefinableInput),
        Verdict3::Unknown(e) => return Err(PipelineError::Unresolved(e)),
    };

    let t_range = 2 * count as u64 + budget.theta;
    let mut steps = StepCounter::new(budget.step_limit);
    let mut search = crate::muchnik::corner_search(rel, s, k, budget);
    let mut corners: Vec<Point> = Vec::new();
    for t in 0..=t_range {
        match search.next_corner(t, &mut steps) {
            Verdict3::Holds(c) => corners.push(c),
            Verdict3::Unknown(e @ Exhaustion::Steps { .. }) => {
                return Err(PipelineError::Unresolved(e))
            }
            // Region exhausted: the resolved prefix ends here.
            Verdict3::Unknown(_) | Verdict3::Fails => break,
        }
    }
    if corners.len() < budget.theta as usize + 1 {
        return Err(PipelineError::Unresolved(Exhaustion::Budget(budget.clone())));
    }
    let effective = corners.len() as u64 - 1;

    // The corner coordinate functions, restricted to a common strictly
    // increasing domain. They are evaluated from the resolved table; the
    // windowed confirmation rule applies (no modulus: certifying through
    // the `c_i(t) >= t` modulus would need corners quartically far out).
    let dim = rel.dimension();
    let fs: Vec<DivergentFunction> = (0..dim)
        .map(|i| {
            DivergentFunction::from_table(corners.iter().map(|c| c.get(i)).collect())
        })
        .collect();
    let t_prefix = increasing_restriction(&fs, effective)?;

    let cubes: Vec<Cube> = t_prefix
        .iter()
        .map(|&t| rel.cube_at(&corners[t as usize], k))
        .collect::<Result<_, _>>()?;

    // The earliest index whose pattern reaches theta occurrences in the
    // prefix stands in for "appears infinitely often".
    let recurring = t_prefix.iter().zip(&cubes).find_map(|(&t, cube)| {
        let occurrences = cubes.iter().filter(|c| *c == cube).count() as u64;
        (occurrences >= budget.theta).then(|| (t, cube.clone()))
    });

    let (x_prefix, norms) = match &recurring {
        Some((_, pattern)) => {
            let x: Vec<u64> = t_prefix
                .iter()
                .zip(&cubes)
                .filter(|(_, c)| *c == pattern)
                .map(|(&t, _)| t)
                .collect();
            let norms: Vec<u64> = x.iter().map(|&t| corners[t as usize].norm()).collect();
            (x, norms)
        }
        None => (Vec::new(), Vec::new()),
    };
    assert!(
        norms.windows(2).all(|w| w[0] < w[1]),
        "norms along the restriction must strictly increase"
    );

    let certificate = match norms.last() {
        Some(&last) if last >= 9 && norms.len() >= 2 => Some(minimal_period(&Set1D::Windowed(
            WindowedSet::from_values(&norms, last),
        ))?),
        _ => None,
    };

    Ok(SRecord {
        s,
        k,
        t_prefix: t_prefix.clone(),
        corners: t_prefix
            .iter()
            .map(|&t| (t, corners[t as usize].clone()))
            .collect(),
        recurring,
        x_prefix,
        norms,
        certificate,
    })
}

/// The recurring cube at shift bound `s`: the earliest confirmed index whose
/// cube pattern occurs at least `theta` times along the restriction.
pub fn recurring_cube(
    rel: &Relation,
    s: u64,
    budget: &Budget,
    count: usize,
) -> Result<Verdict3<(u64, Cube)>, PipelineError> {
    let record = norm_pipeline(rel, s, budget, count)?;
    Ok(match record.recurring {
        Some(pair) => Verdict3::Holds(pair),
        None => Verdict3::Unknown(Exhaustion::Budget(budget.clone())),
    })
}

/// The norm set at shift bound `s`: norms of the corners whose cube equals
/// the recurring pattern, as a witness stream.
pub fn norm_set(
    rel: &Relation,
    s: u64,
    budget: &Budget,
    count: usize,
) -> Result<WitnessStream, PipelineError> {
    let record = norm_pipeline(rel, s, budget, count)?;
    if record.recurring.is_none() {
        return Err(PipelineError::Unresolved(Exhaustion::Budget(budget.clone())));
    }
    let mut values = record.norms;
    let exhausted = (values.len() < count).then(|| Exhaustion::Budget(budget.clone()));
    values.truncate(count);
    Ok(WitnessStream::new(
        values,
        Provenance::DirectNorms { s },
        exhausted,
    ))
}

/// Runs the full witness construction and records the trace.
///
/// Preconditions: the relation must not be semilinear (definable inputs are
/// refused) and should have been judged non-definable by the caller; on
/// budget exhaustion no branch commits and the run is an error rather than a
/// guessed witness.
pub fn extract_witness(
    rel: &Relation,
    budget: &Budget,
    count: usize,
) -> Result<PipelineTrace, PipelineError> {
    if rel.is_semilinear() {
        return Err(PipelineError::DefinableInput);
    }

    if rel.dimension() == 1 {
        let window = budget
            .window
            .min(rel.evaluation_bound().unwrap_or(budget.window));
        let mut values = Vec::new();
        for v in 0..=window {
            if rel.contains_coords(&[v])? {
                values.push(v);
                if values.len() == count {
                    break;
                }
            }
        }
        let exhausted = (values.len() < count).then_some(Exhaustion::Window { window });
        return Ok(PipelineTrace {
            branch: Branch::Base1D,
            per_s: Vec::new(),
            witness: WitnessStream::new(values, Provenance::Relation1D, exhausted),
            inner: None,
        });
    }

    // Branch (a): recurse on the least section judged non-definable.
    if let Some((index, value, _evidence)) = first_non_definable_section(rel, budget)? {
        let section = rel.section(index, value)?;
        let inner = extract_witness(&section, budget, count)?;
        let witness = WitnessStream::new(
            inner.witness.values.clone(),
            Provenance::SectionRecursion { index, value },
            inner.witness.exhausted.clone(),
        );
        return Ok(PipelineTrace {
            branch: Branch::SectionRecursion { index, value },
            per_s: Vec::new(),
            witness,
            inner: Some(Box::new(inner)),
        });
    }

    // Branch (b): per shift bound, commit to the first non-periodic norm set.
    let mut per_s = Vec::new();
    for s in 1..=budget.max_s {
        let record = norm_pipeline(rel, s, budget, count)?;
        let committed = matches!(
            record.certificate,
            Some(PeriodicityCertificate {
                verdict: CertVerdict::NotPeriodic { .. },
                ..
            })
        );
        per_s.push(record);
        if committed {
            let record = per_s.last().expect("just pushed");
            let mut values = record.norms.clone();
            let exhausted =
                (values.len() < count).then(|| Exhaustion::Budget(budget.clone()));
            values.truncate(count);
            let witness = WitnessStream::new(
                values,
                Provenance::DirectNorms { s },
                exhausted,
            );
            return Ok(PipelineTrace {
                branch: Branch::DirectNorms { s },
                per_s,
                witness,
                inner: None,
            });
        }
    }

    // Branch (c): all norm sets look periodic; their family (rows indexed by
    // s - 1) feeds the common-period construction.
    for record in &per_s {
        if record.certificate.is_none() {
            return Err(PipelineError::Unresolved(Exhaustion::Budget(budget.clone())));
        }
    }
    let max_norm = per_s
        .iter()
        .flat_map(|r| r.norms.last().copied())
        .max()
        .ok_or_else(|| PipelineError::Unresolved(Exhaustion::Budget(budget.clone())))?;
    let mut family_points = Vec::new();
    for record in &per_s {
        for &n in &record.norms {
            family_points.push(Point::new(vec![record.s - 1, n]));
        }
    }
    let family = Relation::finite_table(2, family_points, max_norm)?;
    let witness = lcm_witness(&family, count, max_norm)?;
    Ok(PipelineTrace {
        branch: Branch::LcmOverS,
        per_s,
        witness,
        inner: None,
    })
}

/// For every recorded shift bound whose norm set got an empirical
/// periodicity certificate, the period must exceed the shift bound.
pub fn check_period_exceeds_shift(trace: &PipelineTrace) -> bool {
    trace.per_s.iter().all(|record| match record.certificate {
        Some(PeriodicityCertificate {
            period,
            verdict: CertVerdict::Empirical { .. },
            ..
        }) => period > record.s,
        _ => true,
    })
}
