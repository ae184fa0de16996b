//! Relations over `ℕ^d` under three representations (finite tables,
//! semilinear sets and named oracles) with a uniform membership interface,
//! sections, and cube views.
//!
//! Tables and oracles carry an evaluation bound `B` and are exact on
//! `[0,B]^d`; querying beyond the bound is a hard [`RelationError::OutOfBound`]
//! error, never a silent `false`. Semilinear relations are exact everywhere.

mod builtin;
mod cube;
mod linear;
mod point;
mod specfile;

pub use builtin::BuiltinOracle;
pub use cube::Cube;
pub use linear::LinearSet;
pub use point::{Point, ShiftVector};
pub use specfile::{parse_relation_spec, SpecFileError};

use builtin::Primes;
use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RelationError {
    #[error("dimension mismatch: relation has dimension {expected}, point has {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("coordinate {index} = {value} exceeds the evaluation bound {bound}")]
    OutOfBound { index: usize, value: u64, bound: u64 },
    #[error("sections require dimension >= 2, relation has dimension {got}")]
    DimensionTooSmall { got: usize },
    #[error("coordinate index {index} out of range for dimension {dim}")]
    BadIndex { index: usize, dim: usize },
    #[error("{oracle} is a {expected}-ary oracle, requested dimension {got}")]
    BadOracleDimension {
        oracle: &'static str,
        expected: usize,
        got: usize,
    },
}

#[derive(Debug, Clone)]
enum Body {
    Table {
        points: BTreeSet<Vec<u64>>,
        bound: u64,
    },
    Semilinear(Vec<LinearSet>),
    Builtin {
        oracle: BuiltinOracle,
        bound: u64,
        primes: Option<Primes>,
    },
    Section {
        inner: Box<Relation>,
        index: usize,
        value: u64,
    },
}

/// A subset of `ℕ^d` with decidable (or budget-bounded) membership.
#[derive(Debug, Clone)]
pub struct Relation {
    dim: usize,
    body: Body,
}

impl Relation {
    /// A finite table, exact on `[0,bound]^d` and undefined beyond.
    pub fn finite_table<I>(dim: usize, points: I, bound: u64) -> Result<Relation, RelationError>
    where
        I: IntoIterator<Item = Point>,
    {
        let mut set = BTreeSet::new();
        for p in points {
            if p.dim() != dim {
                return Err(RelationError::DimensionMismatch {
                    expected: dim,
                    got: p.dim(),
                });
            }
            if let Some(i) = p.coords().iter().position(|&c| c > bound) {
                return Err(RelationError::OutOfBound {
                    index: i,
                    value: p.get(i),
                    bound,
                });
            }
            set.insert(p.coords().to_vec());
        }
        Ok(Relation {
            dim,
            body: Body::Table { points: set, bound },
        })
    }

    /// A finite union of linear sets; membership is exact for all points.
    pub fn semilinear(sets: Vec<LinearSet>, dim: usize) -> Result<Relation, RelationError> {
        for s in &sets {
            if s.dim() != dim {
                return Err(RelationError::DimensionMismatch {
                    expected: dim,
                    got: s.dim(),
                });
            }
        }
        Ok(Relation {
            dim,
            body: Body::Semilinear(sets),
        })
    }

    /// A named oracle with the given evaluation bound.
    pub fn builtin(oracle: BuiltinOracle, dim: usize, bound: u64) -> Result<Relation, RelationError> {
        if let Some(expected) = oracle.fixed_dimension() {
            if expected != dim {
                return Err(RelationError::BadOracleDimension {
                    oracle: oracle.name(),
                    expected,
                    got: dim,
                });
            }
        }
        let primes = oracle
            .needs_primes()
            .then(|| Primes::with_count(bound.min(20_000) as usize + 1));
        Ok(Relation {
            dim,
            body: Body::Builtin {
                oracle,
                bound,
                primes,
            },
        })
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    /// The evaluation bound, or `None` for semilinear relations, which are
    /// exact everywhere.
    pub fn evaluation_bound(&self) -> Option<u64> {
        match &self.body {
            Body::Table { bound, .. } | Body::Builtin { bound, .. } => Some(*bound),
            Body::Semilinear(_) => None,
            Body::Section { inner, .. } => inner.evaluation_bound(),
        }
    }

    pub fn is_semilinear(&self) -> bool {
        matches!(&self.body, Body::Semilinear(_))
    }

    /// A short description used in report headers.
    pub fn describe(&self) -> String {
        match &self.body {
            Body::Table { points, bound } => {
                format!("table({} points, bound {bound})", points.len())
            }
            Body::Semilinear(sets) => format!("semilinear({} linear sets)", sets.len()),
            Body::Builtin { oracle, bound, .. } => format!("builtin {oracle} bound {bound}"),
            Body::Section {
                inner,
                index,
                value,
            } => format!("section x{index}={value} of {}", inner.describe()),
        }
    }

    pub fn contains(&self, p: &Point) -> Result<bool, RelationError> {
        if p.dim() != self.dim {
            return Err(RelationError::DimensionMismatch {
                expected: self.dim,
                got: p.dim(),
            });
        }
        self.contains_coords(p.coords())
    }

    /// Membership by raw coordinates; the hot path of every search.
    pub fn contains_coords(&self, coords: &[u64]) -> Result<bool, RelationError> {
        debug_assert_eq!(coords.len(), self.dim);
        match &self.body {
            Body::Table { points, bound } => {
                check_bound(coords, *bound)?;
                Ok(points.contains(coords))
            }
            Body::Semilinear(sets) => Ok(sets.iter().any(|s| s.contains(coords))),
            Body::Builtin {
                oracle,
                bound,
                primes,
            } => {
                check_bound(coords, *bound)?;
                Ok(oracle.eval(coords, primes.as_ref()))
            }
            Body::Section {
                inner,
                index,
                value,
            } => {
                let mut full = Vec::with_capacity(coords.len() + 1);
                full.extend_from_slice(&coords[..*index]);
                full.push(*value);
                full.extend_from_slice(&coords[*index..]);
                inner.contains_coords(&full)
            }
        }
    }

    /// The `(d-1)`-dimensional slice obtained by fixing coordinate `index`
    /// to `value`. Semilinear sections are computed exactly; tables are
    /// projected; oracle sections wrap the parent predicate.
    pub fn section(&self, index: usize, value: u64) -> Result<Relation, RelationError> {
        if self.dim < 2 {
            return Err(RelationError::DimensionTooSmall { got: self.dim });
        }
        if index >= self.dim {
            return Err(RelationError::BadIndex {
                index,
                dim: self.dim,
            });
        }
        let dim = self.dim - 1;
        match &self.body {
            Body::Table { points, bound } => {
                if value > *bound {
                    return Err(RelationError::OutOfBound {
                        index,
                        value,
                        bound: *bound,
                    });
                }
                let projected = points
                    .iter()
                    .filter(|c| c[index] == value)
                    .map(|c| {
                        let mut c = c.clone();
                        c.remove(index);
                        c
                    })
                    .collect();
                Ok(Relation {
                    dim,
                    body: Body::Table {
                        points: projected,
                        bound: *bound,
                    },
                })
            }
            Body::Semilinear(sets) => {
                let pieces = sets
                    .iter()
                    .flat_map(|s| s.section_at(index, value))
                    .collect();
                Ok(Relation {
                    dim,
                    body: Body::Semilinear(pieces),
                })
            }
            Body::Builtin { .. } | Body::Section { .. } => Ok(Relation {
                dim,
                body: Body::Section {
                    inner: Box::new(self.clone()),
                    index,
                    value,
                },
            }),
        }
    }

    /// The membership pattern of the box `x + {0..k}^d`.
    pub fn cube_at(&self, x: &Point, k: u64) -> Result<Cube, RelationError> {
        if x.dim() != self.dim {
            return Err(RelationError::DimensionMismatch {
                expected: self.dim,
                got: x.dim(),
            });
        }
        let mut cube = Cube::empty(self.dim, k);
        let mut probe = vec![0u64; self.dim];
        let mut offset = vec![0u64; self.dim];
        loop {
            for i in 0..self.dim {
                probe[i] = x
                    .get(i)
                    .checked_add(offset[i])
                    .expect("overflow while forming a cube corner");
            }
            if self.contains_coords(&probe)? {
                cube.set(&offset);
            }
            if !cube::next_offset(&mut offset, k) {
                break;
            }
        }
        Ok(cube)
    }
}

fn check_bound(coords: &[u64], bound: u64) -> Result<(), RelationError> {
    for (i, &c) in coords.iter().enumerate() {
        if c > bound {
            return Err(RelationError::OutOfBound {
                index: i,
                value: c,
                bound,
            });
        }
    }
    Ok(())
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r0() -> Relation {
        Relation::builtin(BuiltinOracle::SquaresTimesN, 2, 10_000).unwrap()
    }

    fn r1() -> Relation {
        Relation::builtin(BuiltinOracle::OddLeSquare, 2, 10_000).unwrap()
    }

    fn pt(coords: &[u64]) -> Point {
        Point::new(coords.to_vec())
    }

    #[test]
    fn contains_examples() {
        let odd_second = Relation::semilinear(
            vec![LinearSet::new(
                pt(&[0, 1]),
                vec![pt(&[1, 0]), pt(&[0, 2])],
            )],
            2,
        )
        .unwrap();
        assert!(odd_second.contains(&pt(&[3, 1])).unwrap());
        assert!(!odd_second.contains(&pt(&[3, 2])).unwrap());

        assert!(r1().contains(&pt(&[4, 3])).unwrap());
        assert!(!r1().contains(&pt(&[10, 3])).unwrap());
        assert!(r0().contains(&pt(&[9, 5])).unwrap());
        assert!(!r0().contains(&pt(&[8, 5])).unwrap());
    }

    #[test]
    fn out_of_bound_is_an_error() {
        let rel = Relation::builtin(BuiltinOracle::Full, 2, 100).unwrap();
        assert!(rel.contains(&pt(&[5, 5])).unwrap());
        assert_eq!(
            rel.contains(&pt(&[5, 101])),
            Err(RelationError::OutOfBound {
                index: 1,
                value: 101,
                bound: 100
            })
        );
        assert!(matches!(
            rel.contains(&pt(&[1, 2, 3])),
            Err(RelationError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn sections_of_the_addition_graph() {
        // {(a, b, a+b)} tabulated on [0,12]^3.
        let bound = 12;
        let mut points = Vec::new();
        for a in 0..=bound {
            for b in 0..=bound {
                if a + b <= bound {
                    points.push(pt(&[a, b, a + b]));
                }
            }
        }
        let rel = Relation::finite_table(3, points, bound).unwrap();
        for c in 0..=6u64 {
            let sec = rel.section(2, c).unwrap();
            for n in 0..=bound {
                for m in 0..=bound {
                    let expected = n + m == c;
                    assert_eq!(sec.contains(&pt(&[n, m])).unwrap(), expected);
                }
            }
        }
    }

    #[test]
    fn section_of_squares_relation() {
        let sec = r0().section(1, 0).unwrap();
        assert_eq!(sec.dimension(), 1);
        for v in 0..200u64 {
            let expected = v.isqrt() * v.isqrt() == v;
            assert_eq!(sec.contains(&pt(&[v])).unwrap(), expected);
        }
    }

    #[test]
    fn section_of_full_is_full() {
        let full = Relation::builtin(BuiltinOracle::Full, 2, 1000).unwrap();
        for i in 0..2 {
            let sec = full.section(i, 7).unwrap();
            for v in 0..50 {
                assert!(sec.contains(&pt(&[v])).unwrap());
            }
        }
    }

    #[test]
    fn section_requires_dimension_two() {
        let one = Relation::builtin(BuiltinOracle::Full, 1, 10).unwrap();
        assert_eq!(
            one.section(0, 0).unwrap_err(),
            RelationError::DimensionTooSmall { got: 1 }
        );
    }

    #[test]
    fn double_sections_commute_with_direct_slicing() {
        // Pseudo-random table on [0,6]^3.
        let bound = 6u64;
        let mut points = Vec::new();
        for a in 0..=bound {
            for b in 0..=bound {
                for c in 0..=bound {
                    if (a * 7 + b * 3 + c * 11) % 5 < 2 {
                        points.push(pt(&[a, b, c]));
                    }
                }
            }
        }
        let rel = Relation::finite_table(3, points, bound).unwrap();
        for i in 0..3usize {
            for j in 0..2usize {
                for ci in 0..=3u64 {
                    for cj in 0..=3u64 {
                        let twice = rel.section(i, ci).unwrap().section(j, cj).unwrap();
                        for v in 0..=bound {
                            // Reconstruct the full point the two sections pin down.
                            let mut rest = vec![v];
                            rest.insert(j, cj);
                            rest.insert(i, ci);
                            let direct = rel.contains(&pt(&rest)).unwrap();
                            assert_eq!(twice.contains(&pt(&[v])).unwrap(), direct);
                        }
                    }
                }
            }
        }
    }

    /// Independent enumeration oracle for cube contents.
    fn cube_by_enumeration(rel: &Relation, x: &Point, k: u64) -> Vec<Vec<u64>> {
        let mut included = Vec::new();
        let mut offset = vec![0u64; rel.dimension()];
        loop {
            let probe: Vec<u64> = x
                .coords()
                .iter()
                .zip(&offset)
                .map(|(&a, &b)| a + b)
                .collect();
            if rel.contains(&pt(&probe)).unwrap() {
                included.push(offset.clone());
            }
            if !super::cube::next_offset(&mut offset, k) {
                break;
            }
        }
        included
    }

    #[test]
    fn cube_examples() {
        let r1 = r1();
        // Enumerating the four points around (4,1) finds none in R1.
        assert!(cube_by_enumeration(&r1, &pt(&[4, 1]), 1).is_empty());
        let c = r1.cube_at(&pt(&[4, 1]), 1).unwrap();
        assert!(c.is_empty_pattern());

        // Lower-left corners ((c+1)^2, c) for even c carry exactly {(0,1)}.
        for c in [0u64, 2, 4, 6] {
            let corner = pt(&[(c + 1) * (c + 1), c]);
            let cube = r1.cube_at(&corner, 1).unwrap();
            assert_eq!(cube_by_enumeration(&r1, &corner, 1), vec![vec![0, 1]]);
            assert_eq!(cube.to_string(), "{(0,1)}");
        }

        let empty = Relation::builtin(BuiltinOracle::Empty, 2, 1000).unwrap();
        for k in 0..4 {
            assert!(empty.cube_at(&pt(&[3, 5]), k).unwrap().is_empty_pattern());
        }
    }

    #[test]
    fn cube_agrees_with_enumeration_on_a_window() {
        let r1 = r1();
        for x0 in 0..8u64 {
            for x1 in 0..8u64 {
                for k in 0..3u64 {
                    let cube = r1.cube_at(&pt(&[x0, x1]), k).unwrap();
                    let listed = cube_by_enumeration(&r1, &pt(&[x0, x1]), k);
                    let mut count = 0;
                    for off in &listed {
                        assert!(cube.contains_offset(off));
                        count += 1;
                    }
                    assert_eq!(cube.point_count(), count);
                }
            }
        }
    }

    #[test]
    fn cube_restriction_consistency() {
        let r1 = r1();
        for x0 in 0..6u64 {
            for x1 in 0..6u64 {
                let big = r1.cube_at(&pt(&[x0, x1]), 3).unwrap();
                for k in 0..3u64 {
                    assert_eq!(big.restrict(k), r1.cube_at(&pt(&[x0, x1]), k).unwrap());
                }
            }
        }
    }

    #[test]
    fn cube_out_of_bound_propagates() {
        let rel = Relation::builtin(BuiltinOracle::Full, 2, 10).unwrap();
        assert!(rel.cube_at(&pt(&[9, 9]), 1).is_ok());
        assert!(matches!(
            rel.cube_at(&pt(&[10, 10]), 1),
            Err(RelationError::OutOfBound { .. })
        ));
    }

    #[test]
    fn representations_agree_on_shared_window() {
        // Same set as a semilinear description and as its tabulation.
        let semi = Relation::semilinear(
            vec![
                LinearSet::new(pt(&[0, 1]), vec![pt(&[1, 0]), pt(&[0, 2])]),
                LinearSet::new(pt(&[2, 0]), vec![pt(&[3, 1])]),
            ],
            2,
        )
        .unwrap();
        let bound = 15u64;
        let mut points = Vec::new();
        for a in 0..=bound {
            for b in 0..=bound {
                if semi.contains(&pt(&[a, b])).unwrap() {
                    points.push(pt(&[a, b]));
                }
            }
        }
        let table = Relation::finite_table(2, points, bound).unwrap();
        for a in 0..=bound {
            for b in 0..=bound {
                assert_eq!(
                    semi.contains(&pt(&[a, b])).unwrap(),
                    table.contains(&pt(&[a, b])).unwrap()
                );
            }
        }
    }
}
