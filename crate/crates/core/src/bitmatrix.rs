//! Square Boolean matrices with one `u128` word per row.
//!
//! Products use the OR-of-ANDs semiring, so `a.mul(&b)` has a bit at `(i, j)`
//! iff some `k` has `a[i][k]` and `b[k][j]`.

use std::cmp::Ordering;
use std::fmt;

/// Largest supported node count; a row is a single `u128`.
pub const MAX_NODES: usize = 128;

/// Mask with the lowest `k` bits set.
#[inline]
pub fn low_bits(k: usize) -> u128 {
    if k >= 128 {
        !0
    } else {
        (1u128 << k) - 1
    }
}

/// Iterator over the set bit positions of a row, lowest first.
#[derive(Clone, Copy)]
pub struct Ones(u128);

impl Iterator for Ones {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            let bit = self.0.trailing_zeros() as usize;
            self.0 &= self.0 - 1;
            Some(bit)
        }
    }
}

#[inline]
pub fn ones(word: u128) -> Ones {
    Ones(word)
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    n: usize,
    rows: Vec<u128>,
}

impl BitMatrix {
    pub fn zeros(n: usize) -> Self {
        assert!(
            n <= MAX_NODES,
            "bit matrix supports at most {MAX_NODES} rows"
        );
        BitMatrix {
            n,
            rows: vec![0; n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.rows[i] = 1u128 << i;
        }
        m
    }

    /// All `n * n` bits set.
    pub fn full(n: usize) -> Self {
        let mut m = Self::zeros(n);
        let mask = low_bits(n);
        m.rows.iter_mut().for_each(|r| *r = mask);
        m
    }

    /// Bits `(i, j)` with `i < j`.
    pub fn upper_triangle(n: usize) -> Self {
        let mut m = Self::zeros(n);
        let mask = low_bits(n);
        for i in 0..n {
            m.rows[i] = mask & !low_bits(i + 1);
        }
        m
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        (self.rows[i] >> j) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize) {
        self.rows[i] |= 1u128 << j;
    }

    #[inline]
    pub fn clear(&mut self, i: usize, j: usize) {
        self.rows[i] &= !(1u128 << j);
    }

    #[inline]
    pub fn assign(&mut self, i: usize, j: usize, value: bool) {
        if value {
            self.set(i, j)
        } else {
            self.clear(i, j)
        }
    }

    #[inline]
    pub fn row(&self, i: usize) -> u128 {
        self.rows[i]
    }

    #[inline]
    pub fn set_row(&mut self, i: usize, word: u128) {
        self.rows[i] = word;
    }

    pub fn rows(&self) -> &[u128] {
        &self.rows
    }

    pub fn count_ones(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.iter().all(|&r| r == 0)
    }

    /// Set bits in row-major order.
    pub fn iter_ones(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(i, &r)| ones(r).map(move |j| (i, j)))
    }

    /// Boolean product `self * other`.
    pub fn mul(&self, other: &BitMatrix) -> BitMatrix {
        let mut out = BitMatrix::zeros(self.n);
        self.mul_into(other, &mut out);
        out
    }

    pub fn mul_into(&self, other: &BitMatrix, out: &mut BitMatrix) {
        debug_assert_eq!(self.n, other.n);
        debug_assert_eq!(self.n, out.n);
        for (dst, &row) in out.rows.iter_mut().zip(&self.rows) {
            let mut acc = 0u128;
            for k in ones(row) {
                acc |= other.rows[k];
            }
            *dst = acc;
        }
    }

    /// `L`-th Boolean power by repeated squaring; `L = 0` is the identity.
    pub fn pow(&self, mut exp: usize) -> BitMatrix {
        let mut result = BitMatrix::identity(self.n);
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                result = result.mul(&base);
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.n);
        for (i, &row) in self.rows.iter().enumerate() {
            for j in ones(row) {
                t.rows[j] |= 1u128 << i;
            }
        }
        t
    }

    /// `(i, j)` set iff some `c` has both `(c, i)` and `(c, j)`, with `i != j`.
    /// The result is symmetric with an empty diagonal.
    pub fn shared_sources(&self) -> BitMatrix {
        let t = self.transpose();
        let mut out = t.mul(self);
        for i in 0..self.n {
            out.rows[i] &= !(1u128 << i);
        }
        out
    }

    pub fn or_assign(&mut self, other: &BitMatrix) {
        for (a, b) in self.rows.iter_mut().zip(&other.rows) {
            *a |= *b;
        }
    }

    pub fn and(&self, other: &BitMatrix) -> BitMatrix {
        let mut out = self.clone();
        for (a, b) in out.rows.iter_mut().zip(&other.rows) {
            *a &= *b;
        }
        out
    }

    pub fn and_not(&self, other: &BitMatrix) -> BitMatrix {
        let mut out = self.clone();
        for (a, b) in out.rows.iter_mut().zip(&other.rows) {
            *a &= !*b;
        }
        out
    }

    /// Complement within the `n * n` square.
    pub fn complement(&self) -> BitMatrix {
        let mask = low_bits(self.n);
        let mut out = self.clone();
        out.rows.iter_mut().for_each(|r| *r = !*r & mask);
        out
    }

    /// Lexicographic order of the row-major bit vector, with an absent bit
    /// sorting before a present one at the first differing position.
    pub fn canonical_cmp(&self, other: &BitMatrix) -> Ordering {
        self.n.cmp(&other.n).then_with(|| {
            for (&a, &b) in self.rows.iter().zip(&other.rows) {
                let diff = a ^ b;
                if diff != 0 {
                    let bit = diff.trailing_zeros();
                    return if (a >> bit) & 1 == 1 {
                        Ordering::Greater
                    } else {
                        Ordering::Less
                    };
                }
            }
            Ordering::Equal
        })
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix({})", self.n)?;
        for &row in &self.rows {
            let line: String = (0..self.n)
                .map(|j| if (row >> j) & 1 == 1 { '1' } else { '.' })
                .collect();
            writeln!(f, "  {line}")?;
        }
        Ok(())
    }
}
