//! Restricting divergent functions to a common strictly increasing domain.

use super::PipelineError;

/// A function `ℕ → ℕ` that diverges, optionally with a *divergence modulus*:
/// a map `v ↦ H` certifying `f(t) > v` for every `t > H`.
pub struct DivergentFunction {
    eval: Box<dyn Fn(u64) -> u64 + Send + Sync>,
    modulus: Option<Box<dyn Fn(u64) -> u64 + Send + Sync>>,
}

impl DivergentFunction {
    pub fn new(eval: impl Fn(u64) -> u64 + Send + Sync + 'static) -> Self {
        DivergentFunction {
            eval: Box::new(eval),
            modulus: None,
        }
    }

    pub fn with_modulus(
        eval: impl Fn(u64) -> u64 + Send + Sync + 'static,
        modulus: impl Fn(u64) -> u64 + Send + Sync + 'static,
    ) -> Self {
        DivergentFunction {
            eval: Box::new(eval),
            modulus: Some(Box::new(modulus)),
        }
    }

    /// Table-backed function; evaluation beyond the table is a bug and
    /// panics.
    pub fn from_table(values: Vec<u64>) -> Self {
        DivergentFunction::new(move |t| values[t as usize])
    }

    pub fn value(&self, t: u64) -> u64 {
        (self.eval)(t)
    }

    pub fn horizon(&self, v: u64) -> Option<u64> {
        self.modulus.as_ref().map(|m| m(v))
    }

    /// Samples the modulus against the evaluator inside the window.
    fn spot_check(&self, window: u64) -> Result<(), PipelineError> {
        let Some(modulus) = self.modulus.as_ref() else {
            return Ok(());
        };
        for t in [0, window / 3, window / 2] {
            let v = self.value(t);
            let h = modulus(v);
            for probe in h + 1..=(h + 3).min(window) {
                if self.value(probe) <= v {
                    return Err(PipelineError::InvalidModulus { value: v, at: probe });
                }
            }
        }
        Ok(())
    }
}

impl std::fmt::Debug for DivergentFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DivergentFunction")
            .field("modulus", &self.modulus.is_some())
            .finish()
    }
}

/// Restricts `[0, window]` to indices on which every function is strictly
/// increasing, keeping only indices whose membership the window certifies.
///
/// The construction is staged: stage `j` keeps an index `t` of the previous
/// stage when `f_j(t) < f_j(t')` for every later surviving `t'`. An index is
/// *Confirmed* when either the function's divergence modulus reduces the
/// unbounded comparison to a finite one that the window covers, or, for
/// functions without a modulus, every later window value is strictly
/// greater and at least one later index exists. Indices contradicted inside
/// the window are excluded definitively; everything else is tentative and
/// not returned.
///
/// With no functions at all the restriction is trivial and every index is
/// returned.
pub fn increasing_restriction(
    fs: &[DivergentFunction],
    window: u64,
) -> Result<Vec<u64>, PipelineError> {
    let mut current: Vec<u64> = (0..=window).collect();
    for f in fs {
        f.spot_check(window)?;
        current = stage_filter(f, &current, window);
        if current.is_empty() {
            return Err(PipelineError::EmptyRestriction { window });
        }
    }
    Ok(current)
}

fn stage_filter(f: &DivergentFunction, candidates: &[u64], window: u64) -> Vec<u64> {
    let values: Vec<u64> = candidates.iter().map(|&t| f.value(t)).collect();
    let mut kept = Vec::new();
    'candidates: for (pos, &t) in candidates.iter().enumerate() {
        let ft = values[pos];
        // A later surviving index with a value not above f(t) excludes t.
        for later in &values[pos + 1..] {
            if *later <= ft {
                continue 'candidates;
            }
        }
        let confirmed = match f.horizon(ft) {
            Some(h) => {
                // Exact path: the modulus covers everything beyond h; the
                // window must cover (t, h] to finish the comparison.
                h <= window && (t + 1..=h).all(|u| f.value(u) > ft)
            }
            // Window heuristic: strictly dominated by every later value,
            // with at least one later value as evidence.
            None => pos + 1 < candidates.len(),
        };
        if confirmed {
            kept.push(t);
        }
    }
    kept
}
