use std::fmt;

/// The named membership oracles understood by relation spec files.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuiltinOracle {
    /// `R₀ = {(a², b) | a, b ∈ ℕ}`: pairs whose first coordinate is a square.
    SquaresTimesN,
    /// `R₁ = {(x₀, x₁) | x₁ odd, x₀ ≤ x₁²}`.
    OddLeSquare,
    /// `{(n, m) | πₙ divides m}` where `πₙ` is the n-th prime.
    PrimeDivides,
    /// `{(n, m) | πₙ divides m + n², m > n}`.
    PrimeDividesShifted,
    /// All of `ℕ^d`.
    Full,
    /// The empty relation.
    Empty,
}

impl BuiltinOracle {
    pub fn by_name(name: &str) -> Option<BuiltinOracle> {
        Some(match name {
            "squares_times_N" => BuiltinOracle::SquaresTimesN,
            "odd_le_square" => BuiltinOracle::OddLeSquare,
            "prime_divides" => BuiltinOracle::PrimeDivides,
            "prime_divides_shifted" => BuiltinOracle::PrimeDividesShifted,
            "full" => BuiltinOracle::Full,
            "empty" => BuiltinOracle::Empty,
            _ => return None,
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            BuiltinOracle::SquaresTimesN => "squares_times_N",
            BuiltinOracle::OddLeSquare => "odd_le_square",
            BuiltinOracle::PrimeDivides => "prime_divides",
            BuiltinOracle::PrimeDividesShifted => "prime_divides_shifted",
            BuiltinOracle::Full => "full",
            BuiltinOracle::Empty => "empty",
        }
    }

    /// Oracles with a fixed arity; `full` and `empty` accept any dimension.
    pub fn fixed_dimension(&self) -> Option<usize> {
        match self {
            BuiltinOracle::SquaresTimesN
            | BuiltinOracle::OddLeSquare
            | BuiltinOracle::PrimeDivides
            | BuiltinOracle::PrimeDividesShifted => Some(2),
            BuiltinOracle::Full | BuiltinOracle::Empty => None,
        }
    }

    pub fn needs_primes(&self) -> bool {
        matches!(
            self,
            BuiltinOracle::PrimeDivides | BuiltinOracle::PrimeDividesShifted
        )
    }

    pub(crate) fn eval(&self, coords: &[u64], primes: Option<&Primes>) -> bool {
        match self {
            BuiltinOracle::SquaresTimesN => is_square(coords[0]),
            BuiltinOracle::OddLeSquare => {
                let (x0, x1) = (coords[0], coords[1]);
                x1 % 2 == 1 && x0 <= x1 * x1
            }
            BuiltinOracle::PrimeDivides => {
                let p = primes.expect("prime table").nth(coords[0]);
                coords[1] % p == 0
            }
            BuiltinOracle::PrimeDividesShifted => {
                let (n, m) = (coords[0], coords[1]);
                let p = primes.expect("prime table").nth(n);
                m > n && (m + n * n) % p == 0
            }
            BuiltinOracle::Full => true,
            BuiltinOracle::Empty => false,
        }
    }
}

impl fmt::Display for BuiltinOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn is_square(n: u64) -> bool {
    let r = n.isqrt();
    r * r == n
}

/// A sieve of the first primes, sized so index queries up to the owning
/// relation's evaluation bound never miss.
#[derive(Debug, Clone)]
pub(crate) struct Primes {
    list: Vec<u64>,
}

impl Primes {
    pub(crate) fn with_count(count: usize) -> Primes {
        let count = count.max(8);
        // p_n < n (ln n + ln ln n) for n >= 6; pad generously.
        let n = count as f64;
        let limit = (n * (n.ln() + n.ln().ln().max(0.0)) * 1.2) as usize + 64;
        let mut composite = vec![false; limit + 1];
        let mut list = Vec::with_capacity(count);
        for p in 2..=limit {
            if !composite[p] {
                list.push(p as u64);
                if list.len() == count {
                    break;
                }
                let mut q = p * p;
                while q <= limit {
                    composite[q] = true;
                    q += p;
                }
            }
        }
        assert!(list.len() >= count, "prime sieve undersized");
        Primes { list }
    }

    pub(crate) fn nth(&self, n: u64) -> u64 {
        self.list[n as usize]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_table() {
        let primes = Primes::with_count(100);
        assert_eq!(primes.nth(0), 2);
        assert_eq!(primes.nth(1), 3);
        assert_eq!(primes.nth(2), 5);
        assert_eq!(primes.nth(24), 97);
        assert_eq!(primes.nth(99), 541);
    }

    #[test]
    fn oracle_examples() {
        assert!(BuiltinOracle::SquaresTimesN.eval(&[9, 5], None));
        assert!(!BuiltinOracle::SquaresTimesN.eval(&[8, 5], None));
        assert!(BuiltinOracle::OddLeSquare.eval(&[4, 3], None));
        assert!(!BuiltinOracle::OddLeSquare.eval(&[10, 3], None));
        let primes = Primes::with_count(16);
        assert!(BuiltinOracle::PrimeDivides.eval(&[2, 10], Some(&primes)));
        assert!(!BuiltinOracle::PrimeDivides.eval(&[2, 11], Some(&primes)));
        // Row 2 of the shifted family: 5 | m + 4 and m > 2.
        assert!(BuiltinOracle::PrimeDividesShifted.eval(&[2, 6], Some(&primes)));
        assert!(!BuiltinOracle::PrimeDividesShifted.eval(&[2, 5], Some(&primes)));
        assert!(!BuiltinOracle::PrimeDividesShifted.eval(&[2, 1], Some(&primes)));
    }

    #[test]
    fn name_round_trip() {
        for oracle in [
            BuiltinOracle::SquaresTimesN,
            BuiltinOracle::OddLeSquare,
            BuiltinOracle::PrimeDivides,
            BuiltinOracle::PrimeDividesShifted,
            BuiltinOracle::Full,
            BuiltinOracle::Empty,
        ] {
            assert_eq!(BuiltinOracle::by_name(oracle.name()), Some(oracle));
        }
        assert_eq!(BuiltinOracle::by_name("no_such_oracle"), None);
    }
}
