//! Exact arithmetic in the mod-2 cohomology ring of a real Bott manifold.
//!
//! The ring presented by a matrix A has degree-1 generators x_1..x_n and
//! relations x_j² = x_j·α_j where α_j = Σ_i A^i_j x_i is read off column j.
//! Square-free monomials form a basis in every degree, so elements are kept
//! as sets of index subsets and products are normalized by rewriting squares
//! through the relations. Since α_j only involves generators below j, always
//! rewriting the largest repeated index makes the rewrite terminate: the
//! exponent profile strictly decreases in the order that compares the
//! largest index first.
//!
//! On top of the ring sit the degree-1 invariants that detect isomorphism:
//! eigen-elements (the distinct column values α_j), their eigen-spaces
//! (solutions of x² = αx), the nilpotent space N = {x : x² = 0}, and the
//! set S of elements with a zero-product partner.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::bmat::{BottMatrix, BottOperation};
use crate::gf2::{Gf2Matrix, Gf2Vector};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RingError {
    #[error("rings have different generator counts: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("degree {q} out of range 0..={n}")]
    DegreeOutOfRange { q: usize, n: usize },
    #[error("substitution matrix is {rows}x{cols}, expected {n}x{n}")]
    BadSubstitution { rows: usize, cols: usize, n: usize },
}

/// An element of the ring in square-free normal form: the set of monomials
/// present (coefficients are mod 2), each monomial a bitmask of generator
/// indices. The empty mask is the unit monomial.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SquareFreePoly {
    n: usize,
    terms: BTreeSet<u64>,
}

impl SquareFreePoly {
    pub fn zero(n: usize) -> Self {
        SquareFreePoly {
            n,
            terms: BTreeSet::new(),
        }
    }

    pub fn one(n: usize) -> Self {
        let mut terms = BTreeSet::new();
        terms.insert(0);
        SquareFreePoly { n, terms }
    }

    /// The generator x_i (0-based).
    pub fn generator(n: usize, i: usize) -> Self {
        assert!(i < n);
        let mut terms = BTreeSet::new();
        terms.insert(1 << i);
        SquareFreePoly { n, terms }
    }

    /// The degree-1 element with the given coordinate vector.
    pub fn from_linear(v: Gf2Vector) -> Self {
        let mut terms = BTreeSet::new();
        for i in v.support() {
            terms.insert(1u64 << i);
        }
        SquareFreePoly { n: v.dim(), terms }
    }

    /// The square-free monomial with the given index set.
    pub fn monomial(n: usize, mask: u64) -> Self {
        assert!(n >= 64 || mask >> n == 0);
        let mut terms = BTreeSet::new();
        terms.insert(mask);
        SquareFreePoly { n, terms }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = u64> + '_ {
        self.terms.iter().copied()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// The coordinate vector, provided the element is homogeneous of degree 1.
    pub fn as_linear(&self) -> Option<Gf2Vector> {
        let mut v = Gf2Vector::zeros(self.n);
        for &t in &self.terms {
            if t.count_ones() != 1 {
                return None;
            }
            v.set(t.trailing_zeros() as usize, true);
        }
        Some(v)
    }

    pub fn add(&self, other: &Self) -> Result<Self, RingError> {
        if self.n != other.n {
            return Err(RingError::SizeMismatch(self.n, other.n));
        }
        let mut terms = self.terms.clone();
        for &t in &other.terms {
            toggle(&mut terms, t);
        }
        Ok(SquareFreePoly { n: self.n, terms })
    }

    /// Renders monomials as `x1*x3`, joined by ` + `; `0` for zero, `1` for
    /// the unit monomial.
    pub fn to_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|&mask| {
                if mask == 0 {
                    "1".to_string()
                } else {
                    (0..self.n)
                        .filter(|i| mask >> i & 1 == 1)
                        .map(|i| format!("x{}", i + 1))
                        .collect::<Vec<_>>()
                        .join("*")
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl fmt::Debug for SquareFreePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

fn toggle(terms: &mut BTreeSet<u64>, t: u64) {
    if !terms.insert(t) {
        terms.remove(&t);
    }
}

/// An eigen-space: the solution space of x² = αx in degree 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EigenSpace {
    pub alpha: Gf2Vector,
    /// Independent spanning set: α (when nonzero) plus the generators whose
    /// column equals α.
    pub basis: Vec<Gf2Vector>,
    /// Dimension after quotienting out the span of α.
    pub reduced_dim: usize,
    /// False when α is not an eigen-element; the space is then just {0, α}.
    pub eigen: bool,
}

impl EigenSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// All 2^dim elements of the space.
    pub fn elements(&self) -> Vec<Gf2Vector> {
        let n = self.alpha.dim();
        let mut out = Vec::with_capacity(1 << self.basis.len());
        for combo in 0u64..1 << self.basis.len() {
            let mut v = Gf2Vector::zeros(n);
            for (b, vec) in self.basis.iter().enumerate() {
                if combo >> b & 1 == 1 {
                    v ^= *vec;
                }
            }
            out.push(v);
        }
        out
    }
}

/// An eigen-element together with the columns attaining it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EigenElement {
    pub alpha: Gf2Vector,
    /// 0-based column indices j with α_j = alpha.
    pub columns: Vec<usize>,
}

/// The cohomology ring of one matrix, with cached generator products.
#[derive(Clone)]
pub struct RingPresentation {
    matrix: BottMatrix,
    n: usize,
    alphas: Vec<Gf2Vector>,
    /// pairwise_products[i][j] = normal form of x_i · x_j.
    pairwise_products: Vec<Vec<SquareFreePoly>>,
}

impl RingPresentation {
    pub fn new(a: &BottMatrix) -> Self {
        let n = a.n();
        let alphas: Vec<Gf2Vector> = (0..n).map(|j| a.column(j)).collect();
        debug_assert!(n == 0 || alphas[0].is_zero());
        let mut ring = RingPresentation {
            matrix: a.clone(),
            n,
            alphas,
            pairwise_products: Vec::new(),
        };
        let mut table = vec![vec![SquareFreePoly::zero(n); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut exponents = vec![0u8; n];
                exponents[i] += 1;
                exponents[j] += 1;
                let mut terms = BTreeSet::new();
                ring.normalize(&mut exponents, &mut terms);
                table[i][j] = SquareFreePoly { n, terms };
            }
        }
        ring.pairwise_products = table;
        ring
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &BottMatrix {
        &self.matrix
    }

    /// Coefficient vector of α_j (0-based j).
    pub fn alpha(&self, j: usize) -> Gf2Vector {
        self.alphas[j]
    }

    /// Rewrites a monomial-with-exponents into the square-free terms it
    /// contributes, toggling them into `acc`.
    fn normalize(&self, exponents: &mut [u8], acc: &mut BTreeSet<u64>) {
        let repeated = (0..self.n).rev().find(|&i| exponents[i] >= 2);
        match repeated {
            None => {
                let mut mask = 0u64;
                for (i, &e) in exponents.iter().enumerate() {
                    if e == 1 {
                        mask |= 1 << i;
                    }
                }
                toggle(acc, mask);
            }
            Some(j) => {
                // x_j² = x_j·α_j and α_j only involves indices below j;
                // a zero α_j kills the whole term
                exponents[j] -= 1;
                for i in self.alphas[j].support() {
                    exponents[i] += 1;
                    self.normalize(exponents, acc);
                    exponents[i] -= 1;
                }
                exponents[j] += 1;
            }
        }
    }

    /// Product of two elements in square-free normal form.
    pub fn multiply(
        &self,
        p: &SquareFreePoly,
        q: &SquareFreePoly,
    ) -> Result<SquareFreePoly, RingError> {
        if p.n != self.n || q.n != self.n {
            return Err(RingError::SizeMismatch(p.n.max(q.n), self.n));
        }
        let mut terms = BTreeSet::new();
        for &a in &p.terms {
            for &b in &q.terms {
                if a & b == 0 {
                    toggle(&mut terms, a | b);
                } else {
                    let mut exponents = vec![0u8; self.n];
                    for (i, e) in exponents.iter_mut().enumerate() {
                        *e = (a >> i & 1) as u8 + (b >> i & 1) as u8;
                    }
                    self.normalize(&mut exponents, &mut terms);
                }
            }
        }
        Ok(SquareFreePoly { n: self.n, terms })
    }

    /// Product of two degree-1 elements through the cached generator table.
    pub fn multiply_linear(&self, u: Gf2Vector, v: Gf2Vector) -> SquareFreePoly {
        debug_assert_eq!(u.dim(), self.n);
        debug_assert_eq!(v.dim(), self.n);
        let mut terms = BTreeSet::new();
        for i in u.support() {
            for j in v.support() {
                for t in self.pairwise_products[i][j].terms() {
                    toggle(&mut terms, t);
                }
            }
        }
        SquareFreePoly { n: self.n, terms }
    }

    /// Dimension of the degree-q part: C(n,q), verified against the actual
    /// count of square-free basis monomials.
    pub fn betti(&self, q: usize) -> Result<u64, RingError> {
        if q > self.n {
            return Err(RingError::DegreeOutOfRange { q, n: self.n });
        }
        let counted = if self.n == 0 {
            u64::from(q == 0)
        } else {
            (0u64..1 << self.n)
                .filter(|mask| mask.count_ones() as usize == q)
                .count() as u64
        };
        let binomial = {
            let mut acc = 1u64;
            for t in 0..q {
                acc = acc * (self.n - t) as u64 / (t as u64 + 1);
            }
            acc
        };
        assert_eq!(counted, binomial, "square-free basis count must be C(n,q)");
        Ok(binomial)
    }

    /// The distinct column values α_j, each with the columns attaining it,
    /// sorted by coordinate vector. Zero appears iff some column is zero.
    pub fn eigen_elements(&self) -> Vec<EigenElement> {
        let mut out: Vec<EigenElement> = Vec::new();
        for (j, alpha) in self.alphas.iter().enumerate() {
            match out.iter_mut().find(|e| e.alpha == *alpha) {
                Some(e) => e.columns.push(j),
                None => out.push(EigenElement {
                    alpha: *alpha,
                    columns: vec![j],
                }),
            }
        }
        out.sort_by_key(|e| e.alpha);
        out
    }

    /// Solution space of x² = αx. For an eigen-element this is spanned by α
    /// and the generators whose column equals α; otherwise only {0, α}, and
    /// the result is flagged so exhaustive scans stay total.
    pub fn eigen_space(&self, alpha: Gf2Vector) -> EigenSpace {
        assert_eq!(alpha.dim(), self.n);
        let attaining: Vec<usize> = (0..self.n).filter(|&j| self.alphas[j] == alpha).collect();
        let eigen = !attaining.is_empty();
        let mut basis = Vec::new();
        if !alpha.is_zero() {
            // α never lies in the span of the attaining generators: a column
            // value only involves indices below its column
            basis.push(alpha);
        }
        if eigen {
            for &j in &attaining {
                basis.push(Gf2Vector::unit(self.n, j));
            }
        }
        let reduced_dim = basis.len() - usize::from(!alpha.is_zero());
        EigenSpace {
            alpha,
            basis,
            reduced_dim,
            eigen,
        }
    }

    /// The eigen-space of zero: all degree-1 elements with zero square.
    pub fn nilpotent_space(&self) -> EigenSpace {
        self.eigen_space(Gf2Vector::zeros(self.n))
    }

    /// All nonzero x admitting a partner x̄ ∉ {0, x} with x·x̄ = 0, paired
    /// with that partner (x̄ = x + α for the unique eigen-element α of x).
    pub fn s_set(&self) -> Vec<(Gf2Vector, Gf2Vector)> {
        let mut out: Vec<(Gf2Vector, Gf2Vector)> = Vec::new();
        for element in self.eigen_elements() {
            if element.alpha.is_zero() {
                continue;
            }
            let space = self.eigen_space(element.alpha);
            for x in space.elements() {
                if x.is_zero() || x == element.alpha {
                    continue;
                }
                let partner = x ^ element.alpha;
                debug_assert!(self.multiply_linear(x, partner).is_zero());
                out.push((x, partner));
            }
        }
        out.sort_by_key(|&(x, _)| x);
        debug_assert!(out.windows(2).all(|w| w[0].0 != w[1].0));
        out
    }

    /// Substitutes x_j ↦ Σ_i F^i_j y_i and normalizes in this ring (the
    /// target of the substitution).
    pub fn pullback(&self, f: &Gf2Matrix, p: &SquareFreePoly) -> Result<SquareFreePoly, RingError> {
        if f.nrows() != self.n || f.ncols() != self.n {
            return Err(RingError::BadSubstitution {
                rows: f.nrows(),
                cols: f.ncols(),
                n: self.n,
            });
        }
        if p.n != self.n {
            return Err(RingError::SizeMismatch(p.n, self.n));
        }
        let images: Vec<SquareFreePoly> = (0..self.n)
            .map(|j| SquareFreePoly::from_linear(f.column(j)))
            .collect();
        let mut acc = SquareFreePoly::zero(self.n);
        for mask in p.terms() {
            let mut product = SquareFreePoly::one(self.n);
            for (j, image) in images.iter().enumerate() {
                if mask >> j & 1 == 1 {
                    product = self.multiply(&product, image)?;
                }
            }
            acc = acc.add(&product)?;
        }
        Ok(acc)
    }

    /// True iff the degree-1 substitution F is a graded ring isomorphism
    /// from `source` into this ring: F invertible and every relation
    /// x_j² + x_j·α_j of the source maps to zero here. A graded map of these
    /// rings is determined by its degree-1 part because the generators all
    /// live in degree 1.
    pub fn accepts_isomorphism(
        &self,
        f: &Gf2Matrix,
        source: &RingPresentation,
    ) -> Result<bool, RingError> {
        if source.n != self.n {
            return Err(RingError::SizeMismatch(source.n, self.n));
        }
        if f.nrows() != self.n || f.ncols() != self.n {
            return Err(RingError::BadSubstitution {
                rows: f.nrows(),
                cols: f.ncols(),
                n: self.n,
            });
        }
        if !f.is_invertible().unwrap_or(false) {
            return Ok(false);
        }
        for j in 0..self.n {
            let image_xj = f.column(j);
            let mut relation = self.multiply_linear(image_xj, image_xj);
            for i in source.alphas[j].support() {
                relation = relation.add(&self.multiply_linear(image_xj, f.column(i)))?;
            }
            if !relation.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// The degree-1 substitution matrix induced by one move, satisfying
/// φ(b_i) = Π_j a_j^(F^i_j) and x_j ↦ Σ_i F^i_j y_i: the permutation matrix
/// for Op1, the identity with column k bumped by A_k for Op2, and C spread
/// over the class block for Op3.
pub fn phi_matrix(a: &BottMatrix, op: &BottOperation) -> Gf2Matrix {
    let n = a.n();
    let mut f = Gf2Matrix::zeros(n, n);
    match op {
        BottOperation::Permute { sigma } => {
            for i in 0..n {
                f.set(sigma.apply(i), i, true);
            }
        }
        BottOperation::ColumnAdd { k } => {
            for i in 0..n {
                f.set(i, i, true);
            }
            for i in a.column(*k).support() {
                f.set(i, *k, true);
            }
        }
        BottOperation::MixRows { class, c } => {
            for i in 0..n {
                match class.iter().position(|&v| v == i) {
                    None => f.set(i, i, true),
                    Some(row) => {
                        for (col, &j) in class.iter().enumerate() {
                            if c.get(row, col) {
                                f.set(i, j, true);
                            }
                        }
                    }
                }
            }
        }
    }
    f
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bmat::Permutation;
    use proptest::prelude::*;

    fn m(n: usize, entries: &[(usize, usize)]) -> BottMatrix {
        BottMatrix::from_entries(n, entries).unwrap()
    }

    fn klein_ring() -> RingPresentation {
        RingPresentation::new(&m(2, &[(1, 2)]))
    }

    fn vec_of(n: usize, bits: u64) -> Gf2Vector {
        Gf2Vector::from_bits(n, bits).unwrap()
    }

    #[test]
    fn klein_relation() {
        let h = klein_ring();
        let x2 = SquareFreePoly::generator(2, 1);
        assert_eq!(h.multiply(&x2, &x2).unwrap().to_text(), "x1*x2");
    }

    #[test]
    fn klein_cube_vanishes() {
        // x2³ rewrites through x1² = 0
        let h = klein_ring();
        let x2 = SquareFreePoly::generator(2, 1);
        let square = h.multiply(&x2, &x2).unwrap();
        assert!(h.multiply(&square, &x2).unwrap().is_zero());
    }

    #[test]
    fn torus_squares_vanish() {
        let h = RingPresentation::new(&BottMatrix::zero(3));
        for i in 0..3 {
            let x = SquareFreePoly::generator(3, i);
            assert!(h.multiply(&x, &x).unwrap().is_zero());
        }
    }

    /// Independent normal form: rewrites the *smallest* repeated index first
    /// (opposite strategy), so agreement is meaningful.
    fn independent_product(a: &BottMatrix, left: u64, right: u64) -> BTreeSet<u64> {
        fn reduce(a: &BottMatrix, exps: Vec<u8>, acc: &mut BTreeSet<u64>) {
            if let Some(j) = (0..exps.len()).find(|&i| exps[i] >= 2) {
                let col = a.column(j);
                for i in col.support() {
                    let mut next = exps.clone();
                    next[j] -= 1;
                    next[i] += 1;
                    reduce(a, next, acc);
                }
            } else {
                let mut mask = 0u64;
                for (i, &e) in exps.iter().enumerate() {
                    if e == 1 {
                        mask |= 1 << i;
                    }
                }
                if !acc.insert(mask) {
                    acc.remove(&mask);
                }
            }
        }
        let n = a.n();
        let mut exps = vec![0u8; n];
        for (i, e) in exps.iter_mut().enumerate() {
            *e = (left >> i & 1) as u8 + (right >> i & 1) as u8;
        }
        let mut acc = BTreeSet::new();
        reduce(a, exps, &mut acc);
        acc
    }

    #[test]
    fn products_match_independent_normal_form_b3() {
        for packed in 0..8u64 {
            let a = BottMatrix::unpack(3, packed);
            let h = RingPresentation::new(&a);
            for left in 0u64..8 {
                for right in 0u64..8 {
                    let p = SquareFreePoly::monomial(3, left);
                    let q = SquareFreePoly::monomial(3, right);
                    let got: BTreeSet<u64> = h.multiply(&p, &q).unwrap().terms().collect();
                    let expected = independent_product(&a, left, right);
                    assert_eq!(got, expected, "A={a:?} {left:#b}*{right:#b}");
                }
            }
        }
    }

    #[test]
    fn ring_axioms_randomized() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..40 {
            let a = BottMatrix::unpack(5, rng.gen_range(0..1 << 10));
            let h = RingPresentation::new(&a);
            let rand_poly = |rng: &mut rand_chacha::ChaCha8Rng| {
                let mut p = SquareFreePoly::zero(5);
                for _ in 0..rng.gen_range(0..4usize) {
                    p = p
                        .add(&SquareFreePoly::monomial(5, rng.gen_range(0..32)))
                        .unwrap();
                }
                p
            };
            let (p, q, r) = (
                rand_poly(&mut rng),
                rand_poly(&mut rng),
                rand_poly(&mut rng),
            );
            let one = SquareFreePoly::one(5);
            assert_eq!(h.multiply(&p, &q).unwrap(), h.multiply(&q, &p).unwrap());
            let left = h.multiply(&h.multiply(&p, &q).unwrap(), &r).unwrap();
            let right = h.multiply(&p, &h.multiply(&q, &r).unwrap()).unwrap();
            assert_eq!(left, right);
            assert_eq!(h.multiply(&p, &one).unwrap(), p);
        }
    }

    #[test]
    fn betti_counts() {
        let h = RingPresentation::new(&BottMatrix::zero(3));
        assert_eq!(h.betti(0).unwrap(), 1);
        for packed in 0..64u64 {
            let h = RingPresentation::new(&BottMatrix::unpack(4, packed));
            assert_eq!(h.betti(2).unwrap(), 6);
        }
        let h5 = RingPresentation::new(&BottMatrix::unpack(5, 17));
        assert_eq!(h5.betti(5).unwrap(), 1);
        assert!(h5.betti(6).is_err());
    }

    #[test]
    fn eigen_elements_examples() {
        let zero = RingPresentation::new(&BottMatrix::zero(3));
        let elements = zero.eigen_elements();
        assert_eq!(elements.len(), 1);
        assert!(elements[0].alpha.is_zero());
        assert_eq!(elements[0].columns, vec![0, 1, 2]);

        // chain: columns read 0, x1, x2
        let chain = RingPresentation::new(&m(3, &[(1, 2), (2, 3)]));
        let alphas: Vec<u64> = chain
            .eigen_elements()
            .iter()
            .map(|e| e.alpha.bits())
            .collect();
        assert_eq!(alphas, vec![0b000, 0b001, 0b010]);

        // columns 2 and 3 both read x1
        let fork = RingPresentation::new(&m(3, &[(1, 2), (1, 3)]));
        let alphas: Vec<u64> = fork
            .eigen_elements()
            .iter()
            .map(|e| e.alpha.bits())
            .collect();
        assert_eq!(alphas, vec![0b000, 0b001]);
    }

    fn brute_force_eigen_space(h: &RingPresentation, alpha: Gf2Vector) -> Vec<Gf2Vector> {
        let n = h.n();
        (0u64..1 << n)
            .map(|bits| vec_of(n, bits))
            .filter(|&x| h.multiply_linear(x, x) == h.multiply_linear(alpha, x))
            .collect()
    }

    #[test]
    fn eigen_space_matches_brute_force_b4() {
        for packed in 0..64u64 {
            let a = BottMatrix::unpack(4, packed);
            let h = RingPresentation::new(&a);
            for alpha_bits in 0u64..16 {
                let alpha = vec_of(4, alpha_bits);
                let space = h.eigen_space(alpha);
                let mut brute = brute_force_eigen_space(&h, alpha);
                brute.sort();
                if space.eigen {
                    let mut from_basis = space.elements();
                    from_basis.sort();
                    from_basis.dedup();
                    assert_eq!(from_basis.len(), 1 << space.dim(), "basis dependent");
                    assert_eq!(from_basis, brute, "A={a:?} alpha={alpha:?}");
                } else {
                    let mut expected = vec![vec_of(4, 0)];
                    if !alpha.is_zero() {
                        expected.push(alpha);
                    }
                    expected.sort();
                    assert_eq!(brute, expected, "A={a:?} alpha={alpha:?}");
                }
            }
        }
    }

    #[test]
    fn eigen_space_named_examples() {
        let fork = RingPresentation::new(&m(3, &[(1, 2), (1, 3)]));
        assert_eq!(fork.eigen_space(vec_of(3, 0b001)).dim(), 3);

        let torus = RingPresentation::new(&BottMatrix::zero(3));
        assert_eq!(torus.eigen_space(vec_of(3, 0)).dim(), 3);

        let chain = RingPresentation::new(&m(3, &[(1, 2), (2, 3)]));
        let space = chain.eigen_space(vec_of(3, 0b001));
        assert_eq!(space.dim(), 2);
        assert_eq!(space.reduced_dim, 1);
    }

    #[test]
    fn nilpotent_space_examples() {
        assert_eq!(
            RingPresentation::new(&BottMatrix::zero(3))
                .nilpotent_space()
                .dim(),
            3
        );
        let fork = RingPresentation::new(&m(3, &[(1, 2), (1, 3)]));
        let space = fork.nilpotent_space();
        assert_eq!(space.dim(), 1);
        assert_eq!(space.basis, vec![vec_of(3, 0b001)]);
        assert_eq!(klein_ring().nilpotent_space().dim(), 1);
    }

    #[test]
    fn s_set_examples() {
        assert!(RingPresentation::new(&BottMatrix::zero(3))
            .s_set()
            .is_empty());

        let pairs = klein_ring().s_set();
        assert_eq!(pairs.len(), 2);
        assert_eq!(pairs[0], (vec_of(2, 0b10), vec_of(2, 0b11)));
        assert_eq!(pairs[1], (vec_of(2, 0b11), vec_of(2, 0b10)));

        let fork = RingPresentation::new(&m(3, &[(1, 2), (1, 3)]));
        let xs: Vec<u64> = fork.s_set().iter().map(|&(x, _)| x.bits()).collect();
        assert_eq!(xs, vec![0b010, 0b011, 0b100, 0b101, 0b110, 0b111]);
    }

    #[test]
    fn s_set_brute_force_agreement_b4() {
        for packed in 0..64u64 {
            let h = RingPresentation::new(&BottMatrix::unpack(4, packed));
            let mut brute = Vec::new();
            for xb in 1u64..16 {
                let x = vec_of(4, xb);
                let has_partner =
                    (1u64..16).any(|pb| pb != xb && h.multiply_linear(x, vec_of(4, pb)).is_zero());
                if has_partner {
                    brute.push(x);
                }
            }
            let via_eigen: Vec<Gf2Vector> = h.s_set().iter().map(|&(x, _)| x).collect();
            assert_eq!(via_eigen, brute, "A={:?}", BottMatrix::unpack(4, packed));
        }
    }

    #[test]
    fn only_column_values_admit_eigen_witnesses_b4() {
        // brute force: any α admitting x ∉ {0, α} with x² = αx is a column value
        for packed in 0..64u64 {
            let a = BottMatrix::unpack(4, packed);
            let h = RingPresentation::new(&a);
            let columns: BTreeSet<u64> = (0..4).map(|j| a.column(j).bits()).collect();
            for alpha_bits in 0u64..16 {
                let alpha = vec_of(4, alpha_bits);
                let has_witness = (1u64..16).any(|xb| {
                    xb != alpha_bits && {
                        let x = vec_of(4, xb);
                        h.multiply_linear(x, x) == h.multiply_linear(alpha, x)
                    }
                });
                assert_eq!(has_witness, columns.contains(&alpha_bits), "A={a:?}");
            }
        }
    }

    #[test]
    fn pullback_identity_and_permutation() {
        let a = m(3, &[(1, 2), (2, 3)]);
        let h = RingPresentation::new(&a);
        let id = Gf2Matrix::identity(3);
        for mask in 0u64..8 {
            let p = SquareFreePoly::monomial(3, mask);
            assert_eq!(h.pullback(&id, &p).unwrap(), p);
        }

        let single = m(3, &[(1, 2)]);
        let sigma = Permutation::new(vec![1, 2, 0]).unwrap();
        let b = single.apply_op1(&sigma).unwrap();
        let h_b = RingPresentation::new(&b);
        let f = phi_matrix(
            &single,
            &BottOperation::Permute {
                sigma: sigma.clone(),
            },
        );
        for j in 0..3 {
            let image = h_b.pullback(&f, &SquareFreePoly::generator(3, j)).unwrap();
            assert_eq!(image, SquareFreePoly::generator(3, sigma.apply(j)));
        }
    }

    #[test]
    fn op2_substitution_kills_relations() {
        let a = m(3, &[(1, 2), (2, 3)]);
        let b = a.apply_op2(1);
        let h_a = RingPresentation::new(&a);
        let h_b = RingPresentation::new(&b);
        let f = phi_matrix(&a, &BottOperation::ColumnAdd { k: 1 });
        assert!(h_b.accepts_isomorphism(&f, &h_a).unwrap());
    }

    #[test]
    fn all_moves_induce_isomorphisms_b3() {
        use crate::gf2::gl_iter;
        for packed in 0..8u64 {
            let a = BottMatrix::unpack(3, packed);
            let h_a = RingPresentation::new(&a);
            for sigma in Permutation::all(3) {
                if let Some(b) = a.apply_op1(&sigma) {
                    let f = phi_matrix(&a, &BottOperation::Permute { sigma });
                    assert!(RingPresentation::new(&b)
                        .accepts_isomorphism(&f, &h_a)
                        .unwrap());
                }
            }
            for k in 0..3 {
                let b = a.apply_op2(k);
                let f = phi_matrix(&a, &BottOperation::ColumnAdd { k });
                assert!(RingPresentation::new(&b)
                    .accepts_isomorphism(&f, &h_a)
                    .unwrap());
            }
            for class in a.equal_column_classes() {
                for c in gl_iter(class.len(), 6).unwrap() {
                    if let Some(b) = a.apply_op3(&class, &c).unwrap() {
                        let f = phi_matrix(
                            &a,
                            &BottOperation::MixRows {
                                class: class.clone(),
                                c,
                            },
                        );
                        assert!(RingPresentation::new(&b)
                            .accepts_isomorphism(&f, &h_a)
                            .unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn poly_text_forms() {
        let p = SquareFreePoly::monomial(4, 0b1101);
        assert_eq!(p.to_text(), "x1*x3*x4");
        assert_eq!(SquareFreePoly::zero(4).to_text(), "0");
        assert_eq!(SquareFreePoly::one(4).to_text(), "1");
        let sum = p.add(&SquareFreePoly::generator(4, 1)).unwrap();
        assert_eq!(sum.to_text(), "x2 + x1*x3*x4");
    }

    proptest! {
        #[test]
        fn multiplication_never_leaves_normal_form(
            packed in 0u64..64,
            left in 0u64..16,
            right in 0u64..16,
        ) {
            let a = BottMatrix::unpack(4, packed);
            let h = RingPresentation::new(&a);
            let p = SquareFreePoly::monomial(4, left);
            let q = SquareFreePoly::monomial(4, right);
            let product = h.multiply(&p, &q).unwrap();
            for t in product.terms() {
                prop_assert!(t < 16, "non-square-free or out-of-range term");
            }
        }

        #[test]
        fn addition_is_cancellative(left in 0u64..16, right in 0u64..16) {
            let p = SquareFreePoly::monomial(4, left);
            let q = SquareFreePoly::monomial(4, right);
            let sum = p.add(&q).unwrap();
            prop_assert_eq!(sum.add(&q).unwrap(), p);
        }
    }
}
