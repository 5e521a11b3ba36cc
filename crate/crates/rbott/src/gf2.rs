//! Bit-packed GF(2) vectors and matrices.
//!
//! Vectors are a single machine word (dimension ≤ 64), matrices a row vector
//! per row. Provides rank/invertibility by elimination, enumeration of
//! GL(m,2) in a fixed order, and unimodular integer lifts of invertible
//! GF(2) matrices.

use std::fmt;

use thiserror::Error;

/// Hard cap on vector dimension: one machine word.
pub const MAX_DIM: usize = 64;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum Gf2Error {
    #[error("dimension {0} exceeds the {MAX_DIM}-bit limit")]
    DimensionTooLarge(usize),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not invertible over GF(2)")]
    NotInvertible,
    #[error("GL({m},2) enumeration refused: above ceiling {ceiling}")]
    GlCeiling { m: usize, ceiling: usize },
}

/// A vector over GF(2) = {0,1}, packed into one `u64`. Bit `i` is coordinate `i`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gf2Vector {
    dim: usize,
    bits: u64,
}

impl Gf2Vector {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim <= MAX_DIM, "dimension {dim} exceeds {MAX_DIM}");
        Gf2Vector { dim, bits: 0 }
    }

    /// Standard basis vector e_i (0-based).
    pub fn unit(dim: usize, i: usize) -> Self {
        assert!(i < dim, "unit index {i} out of range for dimension {dim}");
        let mut v = Self::zeros(dim);
        v.bits = 1 << i;
        v
    }

    /// Builds a vector from a raw mask; bits at or above `dim` must be clear.
    pub fn from_bits(dim: usize, bits: u64) -> Result<Self, Gf2Error> {
        if dim > MAX_DIM {
            return Err(Gf2Error::DimensionTooLarge(dim));
        }
        if dim < MAX_DIM && bits >> dim != 0 {
            return Err(Gf2Error::DimensionTooLarge(dim));
        }
        Ok(Gf2Vector { dim, bits })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.dim);
        (self.bits >> i) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.dim);
        if value {
            self.bits |= 1 << i;
        } else {
            self.bits &= !(1 << i);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    pub fn weight(&self) -> usize {
        self.bits.count_ones() as usize
    }

    /// Inner product over GF(2): parity of the coordinate-wise AND.
    pub fn dot(&self, other: &Self) -> bool {
        debug_assert_eq!(self.dim, other.dim);
        (self.bits & other.bits).count_ones() % 2 == 1
    }

    /// Indices of nonzero coordinates, ascending.
    pub fn support(&self) -> impl Iterator<Item = usize> {
        let mut bits = self.bits;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }
}

impl std::ops::BitXor for Gf2Vector {
    type Output = Gf2Vector;
    fn bitxor(self, rhs: Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "xor of mismatched dimensions");
        Gf2Vector {
            dim: self.dim,
            bits: self.bits ^ rhs.bits,
        }
    }
}

impl std::ops::BitXorAssign for Gf2Vector {
    fn bitxor_assign(&mut self, rhs: Self) {
        assert_eq!(self.dim, rhs.dim, "xor of mismatched dimensions");
        self.bits ^= rhs.bits;
    }
}

impl fmt::Debug for Gf2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.dim {
            write!(f, "{}", u8::from(self.get(i)))?;
        }
        Ok(())
    }
}

/// A matrix over GF(2), one packed row vector per row.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Gf2Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Gf2Vector>,
}

impl Gf2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Gf2Matrix {
            rows,
            cols,
            data: vec![Gf2Vector::zeros(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i].set(i, true);
        }
        m
    }

    /// Builds a matrix from rows, which must all share one dimension.
    pub fn from_rows(rows: Vec<Gf2Vector>) -> Result<Self, Gf2Error> {
        let cols = rows.first().map_or(0, Gf2Vector::dim);
        for r in &rows {
            if r.dim() != cols {
                return Err(Gf2Error::DimensionMismatch(r.dim(), cols));
            }
        }
        Ok(Gf2Matrix {
            rows: rows.len(),
            cols,
            data: rows,
        })
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> Gf2Vector {
        self.data[i]
    }

    pub fn rows(&self) -> &[Gf2Vector] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.data[i].get(j)
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        self.data[i].set(j, value);
    }

    /// Column `j` as a vector of dimension `nrows`.
    pub fn column(&self, j: usize) -> Gf2Vector {
        let mut c = Gf2Vector::zeros(self.rows);
        for (i, r) in self.data.iter().enumerate() {
            if r.get(j) {
                c.set(i, true);
            }
        }
        c
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in self.data[i].support() {
                t.data[j].set(i, true);
            }
        }
        t
    }

    /// Row rank by Gaussian elimination.
    pub fn rank(&self) -> usize {
        let mut rows: Vec<u64> = self.data.iter().map(Gf2Vector::bits).collect();
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(pivot) = (rank..rows.len()).find(|&r| rows[r] >> col & 1 == 1) else {
                continue;
            };
            rows.swap(rank, pivot);
            let pivot_row = rows[rank];
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && *row >> col & 1 == 1 {
                    *row ^= pivot_row;
                }
            }
            rank += 1;
        }
        rank
    }

    /// True iff the matrix is square of full rank. Non-square input is an error.
    pub fn is_invertible(&self) -> Result<bool, Gf2Error> {
        if self.rows != self.cols {
            return Err(Gf2Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok(self.rank() == self.rows)
    }

    pub fn multiply(&self, other: &Self) -> Result<Self, Gf2Error> {
        if self.cols != other.rows {
            return Err(Gf2Error::DimensionMismatch(self.cols, other.rows));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let mut acc = Gf2Vector::zeros(other.cols);
            for k in self.data[i].support() {
                acc ^= other.data[k];
            }
            out.data[i] = acc;
        }
        Ok(out)
    }
}

impl fmt::Debug for Gf2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Gf2Matrix {}x{}", self.rows, self.cols)?;
        for r in &self.data {
            writeln!(f, "  {r:?}")?;
        }
        Ok(())
    }
}

/// Streams every element of GL(m,2) exactly once.
///
/// Order: ascending integer value of the row masks, most significant row
/// first, so the identity comes first and the order is reproducible.
pub struct GlIter {
    m: usize,
    /// Current partial choice of rows, each independent of its prefix.
    rows: Vec<u64>,
    /// Echelonized span of `rows[..k]` for each prefix length k.
    echelons: Vec<Vec<u64>>,
    done: bool,
}

/// Enumerates GL(m,2). `m` above `ceiling` is refused.
pub fn gl_iter(m: usize, ceiling: usize) -> Result<GlIter, Gf2Error> {
    if m == 0 || m > ceiling {
        return Err(Gf2Error::GlCeiling { m, ceiling });
    }
    Ok(GlIter {
        m,
        rows: Vec::new(),
        echelons: vec![Vec::new()],
        done: false,
    })
}

impl GlIter {
    fn reduce(echelon: &[u64], mut v: u64) -> u64 {
        for &b in echelon {
            let high = 63 - b.leading_zeros();
            if v >> high & 1 == 1 {
                v ^= b;
            }
        }
        v
    }

    /// Extends `rows` to length m, choosing the smallest independent value
    /// `>= start` at the current depth. Returns false on exhaustion there.
    fn fill_from(&mut self, mut start: u64) -> bool {
        let full = 1u64 << self.m;
        while self.rows.len() < self.m {
            let echelon = self.echelons.last().unwrap().clone();
            let mut found = None;
            let mut v = start;
            while v < full {
                let reduced = Self::reduce(&echelon, v);
                if reduced != 0 {
                    found = Some((v, reduced));
                    break;
                }
                v += 1;
            }
            match found {
                Some((v, reduced)) => {
                    self.rows.push(v);
                    let mut next = echelon;
                    next.push(reduced);
                    next.sort_unstable_by(|a, b| b.cmp(a));
                    self.echelons.push(next);
                    start = 1;
                }
                None => return false,
            }
        }
        true
    }

    /// Backtracks to the deepest position that can still advance, then refills.
    fn advance(&mut self) {
        while let Some(last) = self.rows.pop() {
            self.echelons.pop();
            if self.fill_from(last + 1) {
                return;
            }
        }
        self.done = true;
    }
}

impl Iterator for GlIter {
    type Item = Gf2Matrix;

    fn next(&mut self) -> Option<Gf2Matrix> {
        if self.done {
            return None;
        }
        if self.rows.is_empty() && !self.fill_from(1) {
            self.done = true;
            return None;
        }
        let out = Gf2Matrix::from_rows(
            self.rows
                .iter()
                .map(|&b| Gf2Vector::from_bits(self.m, b).unwrap())
                .collect(),
        )
        .unwrap();
        self.advance();
        Some(out)
    }
}

/// A square integer matrix, used for unimodular lifts of GF(2) matrices.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    n: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn identity(n: usize) -> Self {
        let mut data = vec![0; n * n];
        for i in 0..n {
            data[i * n + i] = 1;
        }
        IntMatrix { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: i64) {
        self.data[i * self.n + j] = value;
    }

    pub fn multiply(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = IntMatrix {
            n,
            data: vec![0; n * n],
        };
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.get(k, j);
                }
            }
        }
        out
    }

    /// Determinant by fraction-free elimination in i128.
    pub fn det(&self) -> i128 {
        let n = self.n;
        let mut m: Vec<i128> = self.data.iter().map(|&x| x as i128).collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n {
            if m[k * n + k] == 0 {
                let Some(p) = (k + 1..n).find(|&r| m[r * n + k] != 0) else {
                    return 0;
                };
                for j in 0..n {
                    m.swap(k * n + j, p * n + j);
                }
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    m[i * n + j] =
                        (m[i * n + j] * m[k * n + k] - m[i * n + k] * m[k * n + j]) / prev;
                }
                m[i * n + k] = 0;
            }
            prev = m[k * n + k];
        }
        if n == 0 {
            return 1;
        }
        sign * m[(n - 1) * n + (n - 1)]
    }

    pub fn reduce_mod2(&self) -> Gf2Matrix {
        let mut out = Gf2Matrix::zeros(self.n, self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                if self.get(i, j).rem_euclid(2) == 1 {
                    out.set(i, j, true);
                }
            }
        }
        out
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{}", self.n, self.n)?;
        for i in 0..self.n {
            write!(f, " ")?;
            for j in 0..self.n {
                write!(f, " {}", self.get(i, j))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug)]
enum ElementaryOp {
    Swap(usize, usize),
    /// Add row `src` into row `dst`.
    AddRow {
        dst: usize,
        src: usize,
    },
}

/// Lifts an invertible GF(2) matrix to an integer matrix with determinant ±1
/// reducing back to it mod 2.
///
/// The matrix is factored into row swaps and transvections over GF(2); each
/// factor lifts verbatim to Z with determinant ±1, and the lifts are
/// multiplied back in order.
pub fn lift_to_integers(c: &Gf2Matrix) -> Result<IntMatrix, Gf2Error> {
    if c.nrows() != c.ncols() {
        return Err(Gf2Error::NotSquare {
            rows: c.nrows(),
            cols: c.ncols(),
        });
    }
    let n = c.nrows();
    let mut work: Vec<u64> = c.rows().iter().map(Gf2Vector::bits).collect();
    let mut ops = Vec::new();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| work[r] >> col & 1 == 1)
            .ok_or(Gf2Error::NotInvertible)?;
        if pivot != col {
            work.swap(col, pivot);
            ops.push(ElementaryOp::Swap(col, pivot));
        }
        for r in 0..n {
            if r != col && work[r] >> col & 1 == 1 {
                work[r] ^= work[col];
                ops.push(ElementaryOp::AddRow { dst: r, src: col });
            }
        }
    }
    // ops applied left to right reduce C to the identity; over GF(2) every
    // factor is an involution, so C equals the ops multiplied in order.
    let mut lift = IntMatrix::identity(n);
    for op in ops {
        let mut factor = IntMatrix::identity(n);
        match op {
            ElementaryOp::Swap(a, b) => {
                factor.set(a, a, 0);
                factor.set(b, b, 0);
                factor.set(a, b, 1);
                factor.set(b, a, 1);
            }
            ElementaryOp::AddRow { dst, src } => factor.set(dst, src, 1),
        }
        lift = lift.multiply(&factor);
    }
    debug_assert_eq!(&lift.reduce_mod2(), c);
    debug_assert_eq!(lift.det().abs(), 1);
    Ok(lift)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mat(rows: &[&[u8]]) -> Gf2Matrix {
        let cols = rows[0].len();
        Gf2Matrix::from_rows(
            rows.iter()
                .map(|r| {
                    let mut v = Gf2Vector::zeros(cols);
                    for (j, &x) in r.iter().enumerate() {
                        v.set(j, x == 1);
                    }
                    v
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn rank_zero_matrix() {
        assert_eq!(Gf2Matrix::zeros(3, 3).rank(), 0);
    }

    #[test]
    fn rank_identity() {
        assert_eq!(Gf2Matrix::identity(3).rank(), 3);
    }

    #[test]
    fn rank_equal_rows() {
        // two copies of (0,0,1): hand elimination leaves one row
        let m = mat(&[&[0, 0, 1], &[0, 0, 1]]);
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn invertible_identity_and_singular() {
        assert_eq!(Gf2Matrix::identity(2).is_invertible(), Ok(true));
        assert_eq!(mat(&[&[1, 1], &[1, 1]]).is_invertible(), Ok(false));
        assert!(matches!(
            Gf2Matrix::zeros(2, 3).is_invertible(),
            Err(Gf2Error::NotSquare { .. })
        ));
    }

    #[test]
    fn gl2_brute_force_agreement() {
        // brute force over all 16 two-by-two matrices
        let mut invertible = Vec::new();
        for bits in 0u64..16 {
            let m = Gf2Matrix::from_rows(vec![
                Gf2Vector::from_bits(2, bits & 3).unwrap(),
                Gf2Vector::from_bits(2, bits >> 2).unwrap(),
            ])
            .unwrap();
            if m.is_invertible().unwrap() {
                invertible.push(m);
            }
        }
        assert_eq!(invertible.len(), 6);
        let enumerated: Vec<_> = gl_iter(2, 6).unwrap().collect();
        assert_eq!(enumerated.len(), 6);
        for m in &enumerated {
            assert!(invertible.contains(m));
        }
    }

    #[test]
    fn gl_iter_counts() {
        assert_eq!(gl_iter(1, 6).unwrap().count(), 1);
        assert_eq!(gl_iter(3, 6).unwrap().count(), 168);
        assert_eq!(gl_iter(4, 6).unwrap().count(), 20160);
    }

    #[test]
    fn gl_iter_starts_at_identity_and_refuses_above_ceiling() {
        let first = gl_iter(3, 6).unwrap().next().unwrap();
        assert_eq!(first, Gf2Matrix::identity(3));
        assert!(gl_iter(7, 6).is_err());
        assert!(gl_iter(0, 6).is_err());
    }

    #[test]
    fn gl_iter_yields_distinct_invertibles() {
        let all: Vec<_> = gl_iter(3, 6).unwrap().collect();
        for m in &all {
            assert!(m.is_invertible().unwrap());
        }
        let set: std::collections::HashSet<_> = all.iter().map(|m| m.rows().to_vec()).collect();
        assert_eq!(set.len(), all.len());
    }

    #[test]
    fn lift_identity_and_transvection() {
        let id = Gf2Matrix::identity(2);
        assert_eq!(lift_to_integers(&id).unwrap(), IntMatrix::identity(2));

        let t = mat(&[&[1, 1], &[0, 1]]);
        let lifted = lift_to_integers(&t).unwrap();
        assert_eq!(lifted.get(0, 0), 1);
        assert_eq!(lifted.get(0, 1), 1);
        assert_eq!(lifted.get(1, 0), 0);
        assert_eq!(lifted.get(1, 1), 1);
    }

    #[test]
    fn lift_swap_is_unimodular() {
        let s = mat(&[&[0, 1], &[1, 0]]);
        let lifted = lift_to_integers(&s).unwrap();
        assert_eq!(lifted.det().abs(), 1);
        assert_eq!(lifted.reduce_mod2(), s);
    }

    #[test]
    fn lift_rejects_singular() {
        assert!(lift_to_integers(&mat(&[&[1, 1], &[1, 1]])).is_err());
    }

    #[test]
    fn lift_exhaustive_small_gl() {
        for m in 1..=4 {
            for c in gl_iter(m, 6).unwrap() {
                let lifted = lift_to_integers(&c).unwrap();
                assert_eq!(lifted.reduce_mod2(), c);
                assert_eq!(lifted.det().abs(), 1);
            }
        }
    }

    proptest! {
        #[test]
        fn rank_equals_transpose_rank(rows in proptest::collection::vec(0u64..256, 1..8)) {
            let m = Gf2Matrix::from_rows(
                rows.iter().map(|&b| Gf2Vector::from_bits(8, b).unwrap()).collect(),
            ).unwrap();
            prop_assert_eq!(m.rank(), m.transpose().rank());
        }

        #[test]
        fn vector_xor_is_involutive(a in 0u64..1024, b in 0u64..1024) {
            let x = Gf2Vector::from_bits(10, a).unwrap();
            let y = Gf2Vector::from_bits(10, b).unwrap();
            prop_assert_eq!((x ^ y) ^ y, x);
        }
    }
}
