use std::fmt;

/// The membership pattern of a relation on the box `x + {0..k}^d`, encoded as
/// a bitset over the `(k+1)^d` offsets.
///
/// Offsets are indexed by `code(y) = Σ y_i (k+1)^(d-1-i)`, so coordinate 0 is
/// the most significant digit. Two cubes are equal iff they have the same
/// dimension, the same radius and identical bits.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cube {
    dim: usize,
    radius: u64,
    cells: usize,
    bits: Vec<u64>,
}

/// Hard cap on the number of cells, so a typo in a budget fails fast instead
/// of allocating gigabytes.
const MAX_CELLS: u64 = 1 << 24;

impl Cube {
    pub fn empty(dim: usize, radius: u64) -> Self {
        let side = radius + 1;
        let mut cells: u64 = 1;
        for _ in 0..dim {
            cells = cells.checked_mul(side).filter(|&c| c <= MAX_CELLS).expect(
                "cube has too many cells; radius or dimension is far beyond desk scale",
            );
        }
        let cells = cells as usize;
        Cube {
            dim,
            radius,
            cells,
            bits: vec![0; cells.div_ceil(64)],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn radius(&self) -> u64 {
        self.radius
    }

    pub fn num_cells(&self) -> usize {
        self.cells
    }

    /// `code(y) = Σ y_i (k+1)^(d-1-i)` for an offset `y ∈ {0..k}^d`.
    pub fn code(&self, offset: &[u64]) -> usize {
        debug_assert_eq!(offset.len(), self.dim);
        let side = self.radius + 1;
        let mut idx: u64 = 0;
        for &y in offset {
            debug_assert!(y <= self.radius);
            idx = idx * side + y;
        }
        idx as usize
    }

    pub fn set(&mut self, offset: &[u64]) {
        let idx = self.code(offset);
        self.bits[idx / 64] |= 1 << (idx % 64);
    }

    pub fn contains_offset(&self, offset: &[u64]) -> bool {
        let idx = self.code(offset);
        self.bits[idx / 64] & (1 << (idx % 64)) != 0
    }

    pub fn point_count(&self) -> u32 {
        self.bits.iter().map(|w| w.count_ones()).sum()
    }

    pub fn is_empty_pattern(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    /// The same pattern re-encoded at a smaller radius.
    pub fn restrict(&self, radius: u64) -> Cube {
        assert!(radius <= self.radius);
        let mut out = Cube::empty(self.dim, radius);
        let mut offset = vec![0u64; self.dim];
        loop {
            if self.contains_offset(&offset) {
                out.set(&offset);
            }
            if !next_offset(&mut offset, radius) {
                break;
            }
        }
        out
    }

    /// Iterates over all offsets of `{0..k}^d` in code order, calling `f`.
    pub fn for_each_offset(radius: u64, dim: usize, mut f: impl FnMut(&[u64])) {
        let mut offset = vec![0u64; dim];
        loop {
            f(&offset);
            if !next_offset(&mut offset, radius) {
                break;
            }
        }
    }

    /// Builds a cube from the offsets for which `f` returns true.
    pub fn from_pattern(dim: usize, radius: u64, mut f: impl FnMut(&[u64]) -> bool) -> Cube {
        let mut cube = Cube::empty(dim, radius);
        Cube::for_each_offset(radius, dim, |off| {
            if f(off) {
                cube.set(off);
            }
        });
        cube
    }

    /// The bit pattern as a hexadecimal string (bit index = offset code,
    /// least significant bit = code 0), used by the trace line format.
    pub fn mask_hex(&self) -> String {
        let mut s = String::new();
        let mut leading = true;
        for w in self.bits.iter().rev() {
            if leading {
                if *w != 0 || self.bits.len() == 1 {
                    s.push_str(&format!("{w:x}"));
                    leading = false;
                }
            } else {
                s.push_str(&format!("{w:016x}"));
            }
        }
        if s.is_empty() {
            s.push('0');
        }
        s
    }
}

/// Advances a mixed-radix odometer over `{0..radius}^d` in code order.
/// Returns false once the last offset has been visited.
pub(crate) fn next_offset(offset: &mut [u64], radius: u64) -> bool {
    for slot in offset.iter_mut().rev() {
        if *slot < radius {
            *slot += 1;
            return true;
        }
        *slot = 0;
    }
    false
}

impl fmt::Display for Cube {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        let mut first = true;
        let mut offset = vec![0u64; self.dim];
        loop {
            if self.contains_offset(&offset) {
                if !first {
                    write!(f, ",")?;
                }
                first = false;
                write!(f, "(")?;
                for (i, y) in offset.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{y}")?;
                }
                write!(f, ")")?;
            }
            if !next_offset(&mut offset, self.radius) {
                break;
            }
        }
        write!(f, "}}")
    }
}
