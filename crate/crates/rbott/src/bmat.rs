//! Strictly upper-triangular (0,1) matrices and the three equivalence moves
//! on them.
//!
//! A matrix A in this family encodes a tower of RP¹ bundles (a real Bott
//! manifold); two matrices are equivalent when a sequence of the three
//! moves transforms one into the other. The moves are: conjugation by a
//! permutation matrix when the result stays triangular (Op1), adding column
//! k into the columns selected by row k (Op2), and invertibly mixing the
//! rows of one equal-column class (Op3).

use std::fmt;

use thiserror::Error;

use crate::gf2::{Gf2Error, Gf2Matrix, Gf2Vector};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BmatError {
    #[error("bad matrix text: {0}")]
    Parse(String),
    #[error("entry ({i},{j}) violates strict upper triangularity (1-based)")]
    NotTriangular { i: usize, j: usize },
    #[error("index set {{{}}} is not a full equal-column class (1-based)", format_indices(.0))]
    NotAColumnClass(Vec<usize>),
    #[error("mixing matrix has size {got}, class has size {want}")]
    ClassSizeMismatch { got: usize, want: usize },
    #[error("matrix sizes differ: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("not every superdiagonal entry is 1")]
    NotDelta,
    #[error("operation index {0} out of range (1-based, n = {1})")]
    IndexOutOfRange(usize, usize),
    #[error(transparent)]
    Gf2(#[from] Gf2Error),
}

fn format_indices(ix: &[usize]) -> String {
    ix.iter()
        .map(|i| (i + 1).to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// A permutation of {0,..,n-1}; `apply(i)` is the image of `i`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    /// Validates that `images` is a bijection on 0..n.
    pub fn new(images: Vec<usize>) -> Result<Self, BmatError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &v in &images {
            if v >= n || seen[v] {
                return Err(BmatError::Parse(format!(
                    "not a permutation of 0..{n}: {images:?}"
                )));
            }
            seen[v] = true;
        }
        Ok(Permutation(images))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (i, &v) in self.0.iter().enumerate() {
            inv[v] = i;
        }
        Permutation(inv)
    }

    /// `self` after `other`: (self ∘ other)(i) = self(other(i)).
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.len(), other.len());
        Permutation(other.0.iter().map(|&i| self.0[i]).collect())
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    /// All n! permutations, lexicographic on the image sequence.
    pub fn all(n: usize) -> impl Iterator<Item = Permutation> {
        use itertools::Itertools;
        (0..n).permutations(n).map(Permutation)
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}->{}", i + 1, v + 1)?;
        }
        write!(f, "]")
    }
}

/// One equivalence move. Indices are 0-based internally; display is 1-based.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum BottOperation {
    /// Conjugate by the permutation matrix of sigma (Op1).
    Permute { sigma: Permutation },
    /// Add column k into every column j with row-k entry 1 (Op2).
    ColumnAdd { k: usize },
    /// Replace the rows of one equal-column class by invertible mixtures (Op3).
    MixRows { class: Vec<usize>, c: Gf2Matrix },
}

impl fmt::Display for BottOperation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BottOperation::Permute { sigma } => {
                let images: Vec<String> = sigma
                    .images()
                    .iter()
                    .map(|&v| (v + 1).to_string())
                    .collect();
                write!(f, "Op1 sigma=[{}]", images.join(","))
            }
            BottOperation::ColumnAdd { k } => write!(f, "Op2 k={}", k + 1),
            BottOperation::MixRows { class, c } => {
                write!(f, "Op3 I={{{}}} C=[", format_indices(class))?;
                for (i, row) in c.rows().iter().enumerate() {
                    if i > 0 {
                        write!(f, ";")?;
                    }
                    for j in 0..c.ncols() {
                        write!(f, "{}", u8::from(row.get(j)))?;
                    }
                }
                write!(f, "]")
            }
        }
    }
}

/// A strictly upper-triangular (0,1) matrix of size n.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BottMatrix {
    n: usize,
    rows: Vec<Gf2Vector>,
}

impl BottMatrix {
    /// The zero matrix of size n.
    pub fn zero(n: usize) -> Self {
        BottMatrix {
            n,
            rows: vec![Gf2Vector::zeros(n); n],
        }
    }

    /// Validates dimensions and strict upper triangularity.
    pub fn from_rows(rows: Vec<Gf2Vector>) -> Result<Self, BmatError> {
        let n = rows.len();
        for (i, r) in rows.iter().enumerate() {
            if r.dim() != n {
                return Err(BmatError::SizeMismatch(r.dim(), n));
            }
            if let Some(j) = r.support().find(|&j| j <= i) {
                return Err(BmatError::NotTriangular { i: i + 1, j: j + 1 });
            }
        }
        Ok(BottMatrix { n, rows })
    }

    /// Builds from 1-based (i,j) entry positions.
    pub fn from_entries(n: usize, entries: &[(usize, usize)]) -> Result<Self, BmatError> {
        let mut m = Self::zero(n);
        for &(i, j) in entries {
            if i == 0 || j == 0 || i > n || j > n {
                return Err(BmatError::IndexOutOfRange(i.max(j), n));
            }
            if i >= j {
                return Err(BmatError::NotTriangular { i, j });
            }
            m.rows[i - 1].set(j - 1, true);
        }
        Ok(m)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].get(j)
    }

    pub fn row(&self, i: usize) -> Gf2Vector {
        self.rows[i]
    }

    pub fn column(&self, j: usize) -> Gf2Vector {
        let mut c = Gf2Vector::zeros(self.n);
        for i in 0..self.n {
            if self.rows[i].get(j) {
                c.set(i, true);
            }
        }
        c
    }

    pub fn columns(&self) -> Vec<Gf2Vector> {
        (0..self.n).map(|j| self.column(j)).collect()
    }

    pub fn nonzero_column_count(&self) -> usize {
        (0..self.n).filter(|&j| !self.column(j).is_zero()).count()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(Gf2Vector::is_zero)
    }

    pub fn to_gf2(&self) -> Gf2Matrix {
        Gf2Matrix::from_rows(self.rows.clone()).unwrap()
    }

    /// Parses the BMAT text format: first line n, then n lines of n
    /// characters from {0,1}. Also accepts the compact `b{n}:hex` form.
    pub fn from_text(s: &str) -> Result<Self, BmatError> {
        let trimmed = s.trim();
        if trimmed.starts_with('b') && trimmed.contains(':') {
            return Self::from_compact(trimmed);
        }
        let mut lines = trimmed.lines().map(str::trim);
        let first = lines
            .next()
            .ok_or_else(|| BmatError::Parse("empty input".into()))?;
        let n: usize = first
            .parse()
            .map_err(|_| BmatError::Parse(format!("bad size line {first:?}")))?;
        if n > crate::gf2::MAX_DIM {
            return Err(BmatError::Parse(format!("size {n} too large")));
        }
        let mut rows = Vec::with_capacity(n);
        for i in 0..n {
            let line = lines
                .next()
                .ok_or_else(|| BmatError::Parse(format!("missing row {}", i + 1)))?;
            if line.chars().count() != n {
                return Err(BmatError::Parse(format!(
                    "row {} has {} characters, expected {n}",
                    i + 1,
                    line.chars().count()
                )));
            }
            let mut v = Gf2Vector::zeros(n);
            for (j, ch) in line.chars().enumerate() {
                match ch {
                    '0' => {}
                    '1' => v.set(j, true),
                    other => {
                        return Err(BmatError::Parse(format!(
                            "bad character {other:?} in row {}",
                            i + 1
                        )))
                    }
                }
            }
            rows.push(v);
        }
        if let Some(extra) = lines.find(|l| !l.is_empty()) {
            return Err(BmatError::Parse(format!("trailing content {extra:?}")));
        }
        Self::from_rows(rows)
    }

    /// Renders the BMAT text format.
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.n);
        for r in &self.rows {
            for j in 0..self.n {
                out.push(if r.get(j) { '1' } else { '0' });
            }
            out.push('\n');
        }
        out
    }

    fn upper_positions(n: usize) -> impl Iterator<Item = (usize, usize)> {
        (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
    }

    /// Compact form: upper-triangle bits in row-major order as a big-endian
    /// bit string, left-aligned in ceil(m/4) hex digits, prefixed `b{n}:`.
    pub fn compact(&self) -> String {
        let m = self.n * self.n.saturating_sub(1) / 2;
        let digits = m.div_ceil(4);
        let mut nibbles = vec![0u8; digits];
        for (t, (i, j)) in Self::upper_positions(self.n).enumerate() {
            if self.get(i, j) {
                nibbles[t / 4] |= 1 << (3 - t % 4);
            }
        }
        let hex: String = nibbles
            .iter()
            .map(|x| char::from_digit(*x as u32, 16).unwrap())
            .collect();
        format!("b{}:{}", self.n, hex)
    }

    pub fn from_compact(s: &str) -> Result<Self, BmatError> {
        let body = s
            .strip_prefix('b')
            .ok_or_else(|| BmatError::Parse(format!("compact form must start with 'b': {s:?}")))?;
        let (n_str, hex) = body
            .split_once(':')
            .ok_or_else(|| BmatError::Parse(format!("compact form missing ':': {s:?}")))?;
        let n: usize = n_str
            .parse()
            .map_err(|_| BmatError::Parse(format!("bad size in compact form {s:?}")))?;
        let m = n * n.saturating_sub(1) / 2;
        let digits = m.div_ceil(4);
        if hex.len() != digits {
            return Err(BmatError::Parse(format!(
                "compact form for n={n} needs {digits} hex digits, got {}",
                hex.len()
            )));
        }
        let mut nibbles = Vec::with_capacity(digits);
        for ch in hex.chars() {
            let v = ch
                .to_digit(16)
                .ok_or_else(|| BmatError::Parse(format!("bad hex digit {ch:?}")))?;
            nibbles.push(v as u8);
        }
        let mut mat = Self::zero(n);
        for (t, (i, j)) in Self::upper_positions(n).enumerate() {
            if nibbles[t / 4] >> (3 - t % 4) & 1 == 1 {
                mat.rows[i].set(j, true);
            }
        }
        // padding bits beyond position m must be zero
        for t in m..digits * 4 {
            if nibbles[t / 4] >> (3 - t % 4) & 1 == 1 {
                return Err(BmatError::Parse(
                    "nonzero padding bits in compact form".into(),
                ));
            }
        }
        Ok(mat)
    }

    /// Packs the upper-triangle bits into an integer, first position most
    /// significant, so numeric order equals lexicographic order on the bit
    /// stream. Requires n(n-1)/2 <= 63.
    pub fn pack(&self) -> u64 {
        let m = self.n * self.n.saturating_sub(1) / 2;
        assert!(m < 64, "pack only supports n <= 11");
        let mut v = 0u64;
        for (t, (i, j)) in Self::upper_positions(self.n).enumerate() {
            if self.get(i, j) {
                v |= 1 << (m - 1 - t);
            }
        }
        v
    }

    pub fn unpack(n: usize, packed: u64) -> Self {
        let m = n * n.saturating_sub(1) / 2;
        assert!(m < 64, "unpack only supports n <= 11");
        let mut mat = Self::zero(n);
        for (t, (i, j)) in Self::upper_positions(n).enumerate() {
            if packed >> (m - 1 - t) & 1 == 1 {
                mat.rows[i].set(j, true);
            }
        }
        mat
    }

    /// Conjugation by the permutation matrix of sigma; `None` when the
    /// result leaves the strictly upper-triangular family.
    pub fn apply_op1(&self, sigma: &Permutation) -> Option<BottMatrix> {
        assert_eq!(sigma.len(), self.n);
        let mut rows = vec![Gf2Vector::zeros(self.n); self.n];
        for i in 0..self.n {
            for j in self.rows[i].support() {
                let (si, sj) = (sigma.apply(i), sigma.apply(j));
                if si >= sj {
                    return None;
                }
                rows[si].set(sj, true);
            }
        }
        Some(BottMatrix { n: self.n, rows })
    }

    /// Column move: column j += (row-k entry j) * column k. Always lands back
    /// in the family and is an involution. `k` is 0-based.
    pub fn apply_op2(&self, k: usize) -> BottMatrix {
        assert!(k < self.n);
        let kth = self.rows[k];
        let rows = self
            .rows
            .iter()
            .map(|r| if r.get(k) { *r ^ kth } else { *r })
            .collect();
        BottMatrix { n: self.n, rows }
    }

    /// Partition of column indices by column equality. Classes are sorted by
    /// smallest member; all zero columns form a single class.
    pub fn equal_column_classes(&self) -> Vec<Vec<usize>> {
        column_classes_of(&self.columns())
    }

    /// Row mixing inside one equal-column class, without the triangularity
    /// check; the result may leave the family.
    pub(crate) fn mix_rows_raw(&self, class: &[usize], c: &Gf2Matrix) -> Vec<Gf2Vector> {
        let mut rows = self.rows.clone();
        for (a, &i) in class.iter().enumerate() {
            let mut acc = Gf2Vector::zeros(self.n);
            for (b, &k) in class.iter().enumerate() {
                if c.get(a, b) {
                    acc ^= self.rows[k];
                }
            }
            rows[i] = acc;
        }
        rows
    }

    fn check_op3_preconditions(&self, class: &[usize], c: &Gf2Matrix) -> Result<(), BmatError> {
        let mut sorted = class.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != class.len() || !self.equal_column_classes().contains(&sorted) {
            return Err(BmatError::NotAColumnClass(sorted));
        }
        if c.nrows() != class.len() || c.ncols() != class.len() {
            return Err(BmatError::ClassSizeMismatch {
                got: c.nrows().max(c.ncols()),
                want: class.len(),
            });
        }
        if !c.is_invertible()? {
            return Err(BmatError::Gf2(Gf2Error::NotInvertible));
        }
        Ok(())
    }

    /// Row mixing inside one equal-column class (Op3). `class` must be a full
    /// equal-column class (ascending) and `c` invertible of matching size.
    /// Returns `Ok(None)` when the mixed matrix leaves the family.
    pub fn apply_op3(
        &self,
        class: &[usize],
        c: &Gf2Matrix,
    ) -> Result<Option<BottMatrix>, BmatError> {
        self.check_op3_preconditions(class, c)?;
        let rows = self.mix_rows_raw(class, c);
        Ok(BottMatrix::from_rows(rows).ok())
    }

    pub fn apply_operation(&self, op: &BottOperation) -> Result<Option<BottMatrix>, BmatError> {
        match op {
            BottOperation::Permute { sigma } => {
                if sigma.len() != self.n {
                    return Err(BmatError::SizeMismatch(sigma.len(), self.n));
                }
                Ok(self.apply_op1(sigma))
            }
            BottOperation::ColumnAdd { k } => {
                if *k >= self.n {
                    return Err(BmatError::IndexOutOfRange(k + 1, self.n));
                }
                Ok(Some(self.apply_op2(*k)))
            }
            BottOperation::MixRows { class, c } => self.apply_op3(class, c),
        }
    }

    /// Connected components of the support graph (edge {i,j} iff entry
    /// (i,j) = 1), each ascending, sorted by smallest vertex.
    pub fn support_components(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Gf2Vector::zeros(self.n); self.n];
        for i in 0..self.n {
            for j in self.rows[i].support() {
                adj[i].set(j, true);
                adj[j].set(i, true);
            }
        }
        let mut seen = vec![false; self.n];
        let mut components = Vec::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            let mut stack = vec![start];
            let mut comp = Vec::new();
            seen[start] = true;
            while let Some(v) = stack.pop() {
                comp.push(v);
                for w in adj[v].support() {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            components.push(comp);
        }
        components
    }

    /// Block-diagonal sum; `self` occupies the leading block.
    pub fn direct_sum(&self, other: &BottMatrix) -> BottMatrix {
        let n = self.n + other.n;
        let mut rows = Vec::with_capacity(n);
        for r in &self.rows {
            rows.push(Gf2Vector::from_bits(n, r.bits()).unwrap());
        }
        for r in &other.rows {
            rows.push(Gf2Vector::from_bits(n, r.bits() << self.n).unwrap());
        }
        BottMatrix { n, rows }
    }

    /// Submatrix on the given (ascending) index subset.
    pub fn submatrix(&self, keep: &[usize]) -> BottMatrix {
        let k = keep.len();
        let mut out = BottMatrix::zero(k);
        for (a, &i) in keep.iter().enumerate() {
            for (b, &j) in keep.iter().enumerate() {
                if a < b && self.get(i, j) {
                    out.rows[a].set(b, true);
                }
            }
        }
        out
    }

    pub fn is_delta(&self) -> bool {
        self.n >= 1 && (0..self.n - 1).all(|i| self.get(i, i + 1))
    }

    /// For a matrix with an all-ones superdiagonal, clears every (i,i+2)
    /// entry with column moves at k = i+1, increasing i. The result is the
    /// unique reduced form of its class within the family; idempotent.
    pub fn delta_reduce(&self) -> Result<BottMatrix, BmatError> {
        if !self.is_delta() {
            return Err(BmatError::NotDelta);
        }
        let mut m = self.clone();
        for i in 0..self.n.saturating_sub(2) {
            if m.get(i, i + 2) {
                m = m.apply_op2(i + 1);
            }
        }
        debug_assert!(m.is_delta());
        debug_assert!((0..m.n.saturating_sub(2)).all(|i| !m.get(i, i + 2)));
        Ok(m)
    }
}

impl fmt::Debug for BottMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BottMatrix({})", self.compact())
    }
}

impl PartialOrd for BottMatrix {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BottMatrix {
    /// Size first, then lexicographic on the upper-triangle bit stream.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.n.cmp(&other.n).then_with(|| {
            for (i, j) in Self::upper_positions(self.n) {
                let ord = self.get(i, j).cmp(&other.get(i, j));
                if ord != std::cmp::Ordering::Equal {
                    return ord;
                }
            }
            std::cmp::Ordering::Equal
        })
    }
}

/// Partition of {0..n-1} by equality of the given column vectors.
pub(crate) fn column_classes_of(columns: &[Gf2Vector]) -> Vec<Vec<usize>> {
    let mut classes: Vec<(Gf2Vector, Vec<usize>)> = Vec::new();
    for (j, col) in columns.iter().enumerate() {
        match classes.iter_mut().find(|(v, _)| v == col) {
            Some((_, members)) => members.push(j),
            None => classes.push((*col, vec![j])),
        }
    }
    let mut out: Vec<Vec<usize>> = classes.into_iter().map(|(_, m)| m).collect();
    out.sort_by_key(|c| c[0]);
    out
}

/// Applies a move to an arbitrary square GF(2) matrix, permitting
/// intermediates outside the triangular family (they stay inside the union
/// of its permutation conjugates). Used to replay equivalence witnesses.
pub fn apply_operation_union(m: &Gf2Matrix, op: &BottOperation) -> Result<Gf2Matrix, BmatError> {
    let n = m.nrows();
    if m.ncols() != n {
        return Err(BmatError::Gf2(Gf2Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        }));
    }
    match op {
        BottOperation::Permute { sigma } => {
            if sigma.len() != n {
                return Err(BmatError::SizeMismatch(sigma.len(), n));
            }
            let mut out = Gf2Matrix::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    if m.get(i, j) {
                        out.set(sigma.apply(i), sigma.apply(j), true);
                    }
                }
            }
            Ok(out)
        }
        BottOperation::ColumnAdd { k } => {
            if *k >= n {
                return Err(BmatError::IndexOutOfRange(k + 1, n));
            }
            let kth = m.row(*k);
            let rows = m
                .rows()
                .iter()
                .map(|r| if r.get(*k) { *r ^ kth } else { *r })
                .collect();
            Ok(Gf2Matrix::from_rows(rows)?)
        }
        BottOperation::MixRows { class, c } => {
            let columns: Vec<Gf2Vector> = (0..n).map(|j| m.column(j)).collect();
            let mut sorted = class.clone();
            sorted.sort_unstable();
            if !column_classes_of(&columns).contains(&sorted) {
                return Err(BmatError::NotAColumnClass(sorted));
            }
            if !c.is_invertible()? {
                return Err(BmatError::Gf2(Gf2Error::NotInvertible));
            }
            let mut rows: Vec<Gf2Vector> = m.rows().to_vec();
            for (a, &i) in class.iter().enumerate() {
                let mut acc = Gf2Vector::zeros(n);
                for (b, &k) in class.iter().enumerate() {
                    if c.get(a, b) {
                        acc ^= m.row(k);
                    }
                }
                rows[i] = acc;
            }
            Ok(Gf2Matrix::from_rows(rows)?)
        }
    }
}

/// True iff every principal minor of M+E is 1 over GF(2); characterizes the
/// union of permutation conjugates of the triangular family.
pub fn principal_minor_check(m: &Gf2Matrix) -> Result<bool, Gf2Error> {
    let n = m.nrows();
    if m.ncols() != n {
        return Err(Gf2Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    let mut shifted = m.clone();
    for i in 0..n {
        shifted.set(i, i, !shifted.get(i, i));
    }
    for subset in 1u64..1 << n {
        let keep: Vec<usize> = (0..n).filter(|&i| subset >> i & 1 == 1).collect();
        let mut sub = Gf2Matrix::zeros(keep.len(), keep.len());
        for (a, &i) in keep.iter().enumerate() {
            for (b, &j) in keep.iter().enumerate() {
                if shifted.get(i, j) {
                    sub.set(a, b, true);
                }
            }
        }
        // det over GF(2) is 1 iff full rank
        if sub.rank() != keep.len() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A permutation conjugating a union matrix back into the triangular family:
/// a topological order of the digraph with an arc i -> j per (i,j) entry.
/// Deterministic (smallest available vertex first); `None` if the digraph has
/// a cycle, i.e. the matrix is not in the union.
pub fn triangularizing_permutation(m: &Gf2Matrix) -> Option<Permutation> {
    let n = m.nrows();
    let mut indegree = vec![0usize; n];
    for i in 0..n {
        for (j, slot) in indegree.iter_mut().enumerate() {
            if m.get(i, j) {
                *slot += 1;
            }
        }
    }
    let mut available: Vec<usize> = (0..n).filter(|&v| indegree[v] == 0).collect();
    available.sort_unstable();
    let mut order = Vec::with_capacity(n);
    while let Some(&v) = available.first() {
        available.remove(0);
        order.push(v);
        let mut changed = false;
        for (j, degree) in indegree.iter_mut().enumerate() {
            if m.get(v, j) {
                *degree -= 1;
                if *degree == 0 {
                    available.push(j);
                    changed = true;
                }
            }
        }
        if changed {
            available.sort_unstable();
        }
    }
    if order.len() != n {
        return None;
    }
    let mut images = vec![0; n];
    for (pos, &v) in order.iter().enumerate() {
        images[v] = pos;
    }
    Some(Permutation(images))
}
