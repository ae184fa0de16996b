use std::fmt;

/// A point of `ℕ^d`.
///
/// Ordering is lexicographic with coordinate 0 most significant, which is the
/// order used whenever a search commits to a "minimal" point.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    coords: Vec<u64>,
}

impl Point {
    pub fn new(coords: Vec<u64>) -> Self {
        assert!(!coords.is_empty(), "points have dimension >= 1");
        Point { coords }
    }

    pub fn zero(dim: usize) -> Self {
        Point::new(vec![0; dim])
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub fn get(&self, i: usize) -> u64 {
        self.coords[i]
    }

    /// Sum of the coordinates. Aborts with a diagnostic on overflow; witness
    /// coordinates grow quadratically and a wrapped sum would corrupt every
    /// downstream certificate.
    pub fn norm(&self) -> u64 {
        self.coords
            .iter()
            .try_fold(0u64, |acc, &c| acc.checked_add(c))
            .expect("overflow while computing the norm of a point")
    }

    pub fn min_coord(&self) -> u64 {
        *self.coords.iter().min().expect("nonempty")
    }

    pub fn max_coord(&self) -> u64 {
        *self.coords.iter().max().expect("nonempty")
    }

    /// Componentwise translation by a signed shift. `None` when some
    /// coordinate would leave `ℕ`.
    pub fn translate(&self, shift: &ShiftVector) -> Option<Point> {
        debug_assert_eq!(self.dim(), shift.dim());
        let mut out = Vec::with_capacity(self.dim());
        for (&c, &d) in self.coords.iter().zip(shift.deltas()) {
            let v = if d >= 0 {
                c.checked_add(d as u64)
                    .expect("overflow while translating a point")
            } else {
                c.checked_sub(d.unsigned_abs())?
            };
            out.push(v);
        }
        Some(Point::new(out))
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A shift of `ℤ^d`, stored with signed components.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ShiftVector {
    deltas: Vec<i64>,
}

impl ShiftVector {
    pub fn new(deltas: Vec<i64>) -> Self {
        assert!(!deltas.is_empty(), "shifts have dimension >= 1");
        ShiftVector { deltas }
    }

    pub fn zero(dim: usize) -> Self {
        ShiftVector::new(vec![0; dim])
    }

    pub fn dim(&self) -> usize {
        self.deltas.len()
    }

    pub fn deltas(&self) -> &[i64] {
        &self.deltas
    }

    pub fn is_zero(&self) -> bool {
        self.deltas.iter().all(|&d| d == 0)
    }

    /// `max_i |r_i|`.
    pub fn max_abs(&self) -> u64 {
        self.deltas.iter().map(|d| d.unsigned_abs()).max().expect("nonempty")
    }
}

impl fmt::Display for ShiftVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, d) in self.deltas.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, ")")
    }
}
