use super::point::Point;

/// A linear set `{ base + Σ mᵢ·periodᵢ | mᵢ ∈ ℕ }`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearSet {
    base: Point,
    periods: Vec<Point>,
}

impl LinearSet {
    pub fn new(base: Point, periods: Vec<Point>) -> Self {
        let dim = base.dim();
        for p in &periods {
            assert_eq!(p.dim(), dim, "periods must share the base dimension");
        }
        // A zero period generates nothing; dropping it keeps the bounded
        // membership search finite.
        let periods = periods
            .into_iter()
            .filter(|p| p.coords().iter().any(|&c| c != 0))
            .collect();
        LinearSet { base, periods }
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn base(&self) -> &Point {
        &self.base
    }

    pub fn periods(&self) -> &[Point] {
        &self.periods
    }

    /// Exact membership. Every period is nonzero and coordinates are bounded
    /// by the target, so the multiplicity search is finite.
    pub fn contains(&self, target: &[u64]) -> bool {
        debug_assert_eq!(target.len(), self.dim());
        let mut residual = Vec::with_capacity(target.len());
        for (&t, &b) in target.iter().zip(self.base.coords()) {
            match t.checked_sub(b) {
                Some(r) => residual.push(r),
                None => return false,
            }
        }
        solve(&residual, &self.periods)
    }

    /// The linear sets (one per feasible multiplicity assignment of the
    /// periods that move coordinate `index`) describing the section at
    /// `x_index = value`.
    pub fn section_at(&self, index: usize, value: u64) -> Vec<LinearSet> {
        debug_assert!(index < self.dim());
        let (moving, free): (Vec<&Point>, Vec<&Point>) = self
            .periods
            .iter()
            .partition(|p| p.get(index) != 0);

        let Some(budget) = value.checked_sub(self.base.get(index)) else {
            return Vec::new();
        };

        let mut out = Vec::new();
        let mut combo = vec![0u64; moving.len()];
        enumerate_combos(&moving, index, budget, 0, &mut combo, &mut |combo| {
            let mut base = self.base.coords().to_vec();
            for (m, p) in combo.iter().zip(&moving) {
                for (slot, &c) in base.iter_mut().zip(p.coords()) {
                    *slot = slot
                        .checked_add(m.checked_mul(c).expect("overflow in section base"))
                        .expect("overflow in section base");
                }
            }
            debug_assert_eq!(base[index], value);
            base.remove(index);
            let periods = free
                .iter()
                .map(|p| {
                    let mut c = p.coords().to_vec();
                    c.remove(index);
                    Point::new(c)
                })
                .collect();
            out.push(LinearSet::new(Point::new(base), periods));
        });
        out
    }
}

/// Enumerates all multiplicity assignments of `moving` whose contribution to
/// coordinate `index` is exactly `budget`.
fn enumerate_combos(
    moving: &[&Point],
    index: usize,
    budget: u64,
    pos: usize,
    combo: &mut Vec<u64>,
    emit: &mut impl FnMut(&[u64]),
) {
    if pos == moving.len() {
        if budget == 0 {
            emit(combo);
        }
        return;
    }
    let step = moving[pos].get(index);
    debug_assert!(step > 0);
    let mut m = 0;
    loop {
        let used = m * step;
        if used > budget {
            break;
        }
        combo[pos] = m;
        enumerate_combos(moving, index, budget - used, pos + 1, combo, emit);
        m += 1;
    }
    combo[pos] = 0;
}

fn solve(residual: &[u64], periods: &[Point]) -> bool {
    if residual.iter().all(|&r| r == 0) {
        return true;
    }
    let Some((first, rest)) = periods.split_first() else {
        return false;
    };
    // Max multiplicity of `first` is limited by its smallest nonzero step.
    let cap = residual
        .iter()
        .zip(first.coords())
        .filter(|(_, &p)| p > 0)
        .map(|(&r, &p)| r / p)
        .min()
        .unwrap_or(0);
    let mut next = residual.to_vec();
    for m in 0..=cap {
        if m > 0 {
            let mut ok = true;
            for (slot, &p) in next.iter_mut().zip(first.coords()) {
                match slot.checked_sub(p) {
                    Some(v) => *slot = v,
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if !ok {
                return false;
            }
        }
        if solve(&next, rest) {
            return true;
        }
    }
    false
}
