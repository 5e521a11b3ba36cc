//! Splitting a manifold into indecomposable factors and circle factors, with
//! verification suites for uniqueness and cancellation.
//!
//! The cohomology ring splits as an exterior algebra (one circle factor per
//! dimension) tensor the subring generated by S; at matrix level the
//! exterior rank and that subring's presenting matrix fall out of a short
//! normalization: sort zero columns first, mix the leading rows so the
//! dependent ones vanish, cut the corner block. Full factorization scans an
//! orbit for the member whose support graph splits finest, cuts along the
//! components, and recurses; uniqueness of the result is what the
//! verification suite checks exhaustively.

use thiserror::Error;

use crate::bmat::{BmatError, BottMatrix, BottOperation, Permutation};
use crate::classify::{orbit, root_map, ClassifyError};
use crate::cohomology::RingPresentation;
use crate::config::Config;
use crate::gf2::{Gf2Matrix, Gf2Vector};

#[derive(Debug, Error)]
pub enum DecompError {
    #[error("not a Klein pair: {0}")]
    InvalidKleinPair(String),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error(transparent)]
    Matrix(#[from] BmatError),
}

/// Two degree-1 elements with zero product whose sum squares to zero; they
/// generate a Klein-bottle cohomology ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KleinPair {
    pub x: Gf2Vector,
    pub xbar: Gf2Vector,
}

impl KleinPair {
    /// The shared eigen-element x + x̄.
    pub fn eigen_element(&self) -> Gf2Vector {
        self.x ^ self.xbar
    }

    /// Checks the defining conditions inside the ring of `a`.
    pub fn validate(&self, a: &BottMatrix) -> Result<(), DecompError> {
        let bad = |msg: &str| Err(DecompError::InvalidKleinPair(msg.into()));
        if self.x.dim() != a.n() || self.xbar.dim() != a.n() {
            return bad("dimension mismatch");
        }
        if self.x.is_zero() || self.xbar.is_zero() {
            return bad("members must be nonzero");
        }
        if self.x == self.xbar {
            return bad("members must differ");
        }
        let ring = RingPresentation::new(a);
        if !ring.multiply_linear(self.x, self.xbar).is_zero() {
            return bad("product x*xbar is nonzero");
        }
        let alpha = self.eigen_element();
        if !ring.multiply_linear(alpha, alpha).is_zero() {
            return bad("x + xbar does not square to zero");
        }
        Ok(())
    }
}

/// A factored presentation: circle factors plus indecomposable blocks.
#[derive(Clone, Debug)]
pub struct Decomposition {
    /// Number of circle factors (dimension of the exterior part).
    pub exterior_rank: usize,
    /// Indecomposable factors of size >= 2, canonical and sorted.
    pub factors: Vec<BottMatrix>,
    /// Which orbit member and component split produced this.
    pub provenance: String,
}

/// Tracked Gaussian elimination: returns (T, rank) with T invertible and
/// T·rows in echelon form, nonzero rows first.
fn elimination_transform(rows: &[Gf2Vector]) -> (Gf2Matrix, usize) {
    let height = rows.len();
    let width = rows.first().map_or(0, Gf2Vector::dim);
    let mut work: Vec<Gf2Vector> = rows.to_vec();
    let mut transform = Gf2Matrix::identity(height);
    let mut rank = 0;
    for col in 0..width {
        let Some(pivot) = (rank..height).find(|&r| work[r].get(col)) else {
            continue;
        };
        work.swap(rank, pivot);
        let (ta, tb) = (transform.row(rank), transform.row(pivot));
        transform = swap_rows(transform, rank, pivot, ta, tb);
        for r in 0..height {
            if r != rank && work[r].get(col) {
                let pivot_row = work[rank];
                work[r] ^= pivot_row;
                let add = transform.row(rank);
                let mut updated = transform.row(r);
                updated ^= add;
                transform = replace_row(transform, r, updated);
            }
        }
        rank += 1;
    }
    (transform, rank)
}

fn swap_rows(m: Gf2Matrix, a: usize, b: usize, ra: Gf2Vector, rb: Gf2Vector) -> Gf2Matrix {
    let m = replace_row(m, a, rb);
    replace_row(m, b, ra)
}

fn replace_row(m: Gf2Matrix, i: usize, row: Gf2Vector) -> Gf2Matrix {
    let mut rows: Vec<Gf2Vector> = m.rows().to_vec();
    rows[i] = row;
    Gf2Matrix::from_rows(rows).expect("row dimensions unchanged")
}

/// Stable three-bucket reorder sending `first`, then `second`, then the rest
/// to the leading positions; always a legal conjugation here because entries
/// never point from a later bucket into an earlier one.
fn bucket_permutation(n: usize, first: &[usize], second: &[usize]) -> Permutation {
    let mut order: Vec<usize> = Vec::with_capacity(n);
    order.extend_from_slice(first);
    order.extend_from_slice(second);
    for v in 0..n {
        if !first.contains(&v) && !second.contains(&v) {
            order.push(v);
        }
    }
    let mut images = vec![0; n];
    for (pos, &v) in order.iter().enumerate() {
        images[v] = pos;
    }
    Permutation::new(images).expect("bucket order is a bijection")
}

fn permute_vector(v: Gf2Vector, sigma: &Permutation) -> Gf2Vector {
    let mut out = Gf2Vector::zeros(v.dim());
    for i in v.support() {
        out.set(sigma.apply(i), true);
    }
    out
}

/// Splits off the exterior part: returns the number of circle factors and
/// the corner matrix presenting the subring generated by S.
///
/// Normalization: move zero columns first (ℓ of them), mix the leading ℓ
/// rows so that the ℓ−m dependent ones vanish (m = their rank), then cut
/// away the first ℓ−m rows and columns. The input is equivalent to that
/// many 1x1 zero blocks plus the corner.
pub fn extract_hs(a: &BottMatrix) -> (usize, BottMatrix) {
    let n = a.n();
    let zero_columns: Vec<usize> = (0..n).filter(|&j| a.column(j).is_zero()).collect();
    let leading = zero_columns.len();
    if leading == 0 {
        return (0, a.clone());
    }
    let sigma = bucket_permutation(n, &zero_columns, &[]);
    let sorted = a
        .apply_op1(&sigma)
        .expect("moving zero columns first never breaks triangularity");

    let head_rows: Vec<Gf2Vector> = (0..leading).map(|i| sorted.row(i)).collect();
    let (transform, rank) = elimination_transform(&head_rows);
    // zero rows of the echelon form go first
    let order: Vec<usize> = (rank..leading).chain(0..rank).collect();
    let mix = Gf2Matrix::from_rows(order.iter().map(|&i| transform.row(i)).collect())
        .expect("reordered transform rows");
    let class: Vec<usize> = (0..leading).collect();
    let mixed = sorted
        .apply_op3(&class, &mix)
        .expect("the leading zero-column block is a class")
        .expect("mixing rows supported beyond the zero block stays triangular");

    let cut = leading - rank;
    debug_assert!((0..cut).all(|i| mixed.row(i).is_zero()));
    let keep: Vec<usize> = (cut..n).collect();
    (cut, mixed.submatrix(&keep))
}

/// True iff the ring is generated by S, i.e. there is no exterior part.
pub fn is_semisimple(a: &BottMatrix) -> bool {
    extract_hs(a).0 == 0
}

/// A canonical Klein pair {x_j, x_j + α_j} for the smallest nonzero column
/// j; absent exactly when the matrix is zero.
pub fn find_klein_pair(a: &BottMatrix) -> Option<KleinPair> {
    let j = (0..a.n()).find(|&j| !a.column(j).is_zero())?;
    let x = Gf2Vector::unit(a.n(), j);
    let pair = KleinPair {
        x,
        xbar: x ^ a.column(j),
    };
    debug_assert!(pair.validate(a).is_ok());
    Some(pair)
}

/// The quotient construction with its normalization trace: the moves
/// applied, the normalized matrix, the two positions cut, and the quotient.
#[derive(Clone, Debug)]
pub struct QuotientTrace {
    pub ops: Vec<BottOperation>,
    pub normalized: BottMatrix,
    pub removed: (usize, usize),
    pub quotient: BottMatrix,
}

/// Quotients the ring of `a` by the ideal a Klein pair generates; the result
/// is presented by a matrix two sizes smaller.
pub fn quotient_by_klein_pair(a: &BottMatrix, pair: &KleinPair) -> Result<BottMatrix, DecompError> {
    Ok(quotient_by_klein_pair_traced(a, pair)?.quotient)
}

/// As [`quotient_by_klein_pair`], also exposing the normalization steps.
///
/// The pair is moved into standard position by legal moves: zero columns
/// first, the class of its eigen-element α next; one row mix makes α = x_ℓ,
/// another makes x a single generator, a column move strips a leftover α
/// summand. Cutting the two positions then presents the quotient.
pub fn quotient_by_klein_pair_traced(
    a: &BottMatrix,
    pair: &KleinPair,
) -> Result<QuotientTrace, DecompError> {
    pair.validate(a)?;
    let n = a.n();
    let alpha = pair.eigen_element();
    let zero_columns: Vec<usize> = (0..n).filter(|&j| a.column(j).is_zero()).collect();
    if alpha.support().any(|i| !zero_columns.contains(&i)) {
        return Err(DecompError::InvalidKleinPair(
            "eigen-element is not supported on zero columns".into(),
        ));
    }
    let class_j: Vec<usize> = (0..n).filter(|&j| a.column(j) == alpha).collect();
    if class_j.is_empty() {
        return Err(DecompError::InvalidKleinPair(
            "eigen-element is attained by no column".into(),
        ));
    }
    // x = c·α + Σ_{j in J} c_j x_j with some c_j nonzero
    let mut class_part = Gf2Vector::zeros(n);
    for &j in &class_j {
        if pair.x.get(j) {
            class_part.set(j, true);
        }
    }
    let remainder = pair.x ^ class_part;
    let alpha_coefficient = if remainder.is_zero() {
        false
    } else if remainder == alpha {
        true
    } else {
        return Err(DecompError::InvalidKleinPair(
            "x does not lie in the eigen-space of x + xbar".into(),
        ));
    };
    if class_part.is_zero() {
        return Err(DecompError::InvalidKleinPair(
            "x lies in {0, x + xbar}".into(),
        ));
    }

    let mut ops: Vec<BottOperation> = Vec::new();
    let mut current = a.clone();
    let mut x = pair.x;

    // zero columns first, then the class of α, keeping relative order
    let sigma = bucket_permutation(n, &zero_columns, &class_j);
    current = current
        .apply_op1(&sigma)
        .expect("bucket reorder stays triangular");
    x = permute_vector(x, &sigma);
    let alpha = permute_vector(alpha, &sigma);
    ops.push(BottOperation::Permute {
        sigma: sigma.clone(),
    });
    let leading = zero_columns.len();
    let class_len = class_j.len();

    // mix the zero-column rows so that α becomes the single generator x_ℓ
    let alpha_pos = leading - 1;
    let alpha_head: Vec<bool> = (0..leading).map(|i| alpha.get(i)).collect();
    let mix_zero = unit_map(&alpha_head, alpha_pos);
    let zero_class: Vec<usize> = (0..leading).collect();
    current = current
        .apply_op3(&zero_class, &mix_zero)
        .expect("leading zero columns form a class")
        .expect("mixing rows of the zero block stays triangular");
    x = substitute_linear(x, &zero_class, &mix_zero);
    let alpha = Gf2Vector::unit(n, alpha_pos);
    ops.push(BottOperation::MixRows {
        class: zero_class,
        c: mix_zero,
    });
    debug_assert!((leading..leading + class_len).all(|j| current.column(j) == alpha));

    // mix the class rows so that x becomes c·α + a single generator
    let class_positions: Vec<usize> = (leading..leading + class_len).collect();
    let x_class: Vec<bool> = class_positions.iter().map(|&j| x.get(j)).collect();
    let target_offset = x_class
        .iter()
        .position(|&b| b)
        .expect("x has support in the class");
    let mix_class = unit_map(&x_class, target_offset);
    current = current
        .apply_op3(&class_positions, &mix_class)
        .expect("the α class is a full class after normalization")
        .expect("mixing a contiguous class after the zero block stays triangular");
    x = substitute_linear(x, &class_positions, &mix_class);
    let x_pos = leading + target_offset;
    ops.push(BottOperation::MixRows {
        class: class_positions,
        c: mix_class,
    });
    debug_assert_eq!(
        x,
        if alpha_coefficient {
            alpha ^ Gf2Vector::unit(n, x_pos)
        } else {
            Gf2Vector::unit(n, x_pos)
        }
    );

    // a column move absorbs the leftover α summand: x_pos picks up its own
    // column value, which is exactly α
    if alpha_coefficient {
        current = current.apply_op2(x_pos);
        ops.push(BottOperation::ColumnAdd { k: x_pos });
    }
    debug_assert_eq!(current.column(x_pos), alpha);

    let keep: Vec<usize> = (0..n).filter(|&i| i != alpha_pos && i != x_pos).collect();
    let quotient = current.submatrix(&keep);
    Ok(QuotientTrace {
        ops,
        normalized: current,
        removed: (alpha_pos, x_pos),
        quotient,
    })
}

/// An invertible matrix sending the given nonzero coordinate vector to the
/// unit vector at `target`: add the lowest set position into every other set
/// position, then swap it to `target`.
fn unit_map(coords: &[bool], target: usize) -> Gf2Matrix {
    let size = coords.len();
    let pivot = coords
        .iter()
        .position(|&b| b)
        .expect("coordinate vector must be nonzero");
    let mut m = Gf2Matrix::identity(size);
    for (q, &set) in coords.iter().enumerate() {
        if set && q != pivot {
            // row q += row pivot
            let mut row = m.row(q);
            row ^= m.row(pivot);
            m = replace_row(m, q, row);
        }
    }
    if pivot != target {
        let (ra, rb) = (m.row(pivot), m.row(target));
        m = swap_rows(m, pivot, target, ra, rb);
    }
    debug_assert!({
        let mut image = vec![false; size];
        for (r, flag) in image.iter_mut().enumerate() {
            let mut acc = false;
            for (c, &set) in coords.iter().enumerate() {
                acc ^= m.get(r, c) && set;
            }
            *flag = acc;
        }
        image.iter().enumerate().all(|(i, &b)| b == (i == target))
    });
    m
}

/// Rewrites the coordinates of a degree-1 element under a row mix on the
/// given positions: the sub-vector on `positions` maps through `c`.
fn substitute_linear(v: Gf2Vector, positions: &[usize], c: &Gf2Matrix) -> Gf2Vector {
    let mut sub = vec![false; positions.len()];
    for (slot, &p) in positions.iter().enumerate() {
        sub[slot] = v.get(p);
    }
    let mut out = v;
    for &p in positions {
        out.set(p, false);
    }
    for (r, &p) in positions.iter().enumerate() {
        let mut acc = false;
        for (col, &set) in sub.iter().enumerate() {
            acc ^= c.get(r, col) && set;
        }
        if acc {
            out.set(p, true);
        }
    }
    out
}

/// Factors a manifold presentation: scans the whole orbit for the member
/// whose support graph has the most components, splits along them, and
/// recurses into every block of size >= 2.
pub fn decompose(a: &BottMatrix, cfg: &Config) -> Result<Decomposition, ClassifyError> {
    if a.n() == 0 {
        return Ok(Decomposition {
            exterior_rank: 0,
            factors: Vec::new(),
            provenance: "empty".into(),
        });
    }
    let orb = orbit(a, cfg)?;
    let mut best: Option<(usize, u64, BottMatrix, Vec<Vec<usize>>)> = None;
    for member in orb.members() {
        let components = member.support_components();
        let key = (components.len(), u64::MAX - member.pack());
        if best
            .as_ref()
            .is_none_or(|(count, inv_pack, _, _)| key > (*count, *inv_pack))
        {
            best = Some((
                components.len(),
                u64::MAX - member.pack(),
                member,
                components,
            ));
        }
    }
    let (_, _, member, components) = best.expect("orbits are never empty");
    let provenance = format!(
        "member={} components={:?}",
        member.compact(),
        components
            .iter()
            .map(|c| c.iter().map(|v| v + 1).collect::<Vec<_>>())
            .collect::<Vec<_>>()
    );

    if components.len() == 1 {
        // no member splits: indecomposable (or a lone circle when n = 1)
        if a.n() == 1 {
            return Ok(Decomposition {
                exterior_rank: 1,
                factors: Vec::new(),
                provenance,
            });
        }
        return Ok(Decomposition {
            exterior_rank: 0,
            factors: vec![orb.canonical()],
            provenance,
        });
    }

    let mut exterior_rank = 0;
    let mut factors = Vec::new();
    for component in &components {
        if component.len() == 1 {
            exterior_rank += 1;
            continue;
        }
        let block = member.submatrix(component);
        let sub = decompose(&block, cfg)?;
        exterior_rank += sub.exterior_rank;
        factors.extend(sub.factors);
    }
    factors.sort();
    debug_assert_eq!(
        exterior_rank + factors.iter().map(BottMatrix::n).sum::<usize>(),
        a.n()
    );
    Ok(Decomposition {
        exterior_rank,
        factors,
        provenance,
    })
}

/// Outcome of one verification sweep.
#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub n: usize,
    pub cases_checked: usize,
    pub violations: Vec<String>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// For every class and every support-disconnected orbit member, checks that
/// splitting along components and recursing yields one and the same factor
/// multiset (and exterior rank) as the class's own decomposition.
pub fn verify_unique_decomposition(n: usize, cfg: &Config) -> Result<VerifyReport, ClassifyError> {
    let table = crate::classify::classify_all(n, cfg)?;
    let mut violations = Vec::new();
    let mut cases = 0;
    for class in &table.classes {
        cases += 1;
        let reference = decompose(&class.canonical, cfg)?;
        let reference_key = (
            reference.exterior_rank,
            reference
                .factors
                .iter()
                .map(BottMatrix::compact)
                .collect::<Vec<_>>(),
        );
        let orb = orbit(&class.canonical, cfg)?;
        for member in orb.members() {
            let components = member.support_components();
            if components.len() < 2 {
                continue;
            }
            let mut exterior = 0;
            let mut factors: Vec<BottMatrix> = Vec::new();
            for component in &components {
                if component.len() == 1 {
                    exterior += 1;
                    continue;
                }
                let sub = decompose(&member.submatrix(component), cfg)?;
                exterior += sub.exterior_rank;
                factors.extend(sub.factors);
            }
            factors.sort();
            let key = (
                exterior,
                factors.iter().map(BottMatrix::compact).collect::<Vec<_>>(),
            );
            if key != reference_key {
                violations.push(format!(
                    "class {}: member {} splits as {:?}, expected {:?}",
                    class.canonical.compact(),
                    member.compact(),
                    key,
                    reference_key
                ));
            }
        }
    }
    Ok(VerifyReport {
        n,
        cases_checked: cases,
        violations,
    })
}

/// Checks the cancellation property: augmenting two presentations by a
/// circle block never merges distinct classes.
pub fn verify_cancellation(n: usize, cfg: &Config) -> Result<VerifyReport, ClassifyError> {
    let small_roots = root_map(n, cfg)?;
    let big_roots = root_map(n + 1, cfg)?;
    let total: u64 = 1 << (n * (n - 1) / 2);
    let circle = BottMatrix::zero(1);
    let mut augmented_to_small: std::collections::HashMap<u32, u32> =
        std::collections::HashMap::new();
    let mut violations = Vec::new();
    for ix in 0..total {
        let a = BottMatrix::unpack(n, ix);
        let augmented = circle.direct_sum(&a);
        let big_root = big_roots[augmented.pack() as usize];
        let small_root = small_roots[ix as usize];
        match augmented_to_small.entry(big_root) {
            std::collections::hash_map::Entry::Vacant(v) => {
                v.insert(small_root);
            }
            std::collections::hash_map::Entry::Occupied(o) => {
                if *o.get() != small_root {
                    violations.push(format!(
                        "augmentations of {} and {} merge but the originals do not",
                        BottMatrix::unpack(n, *o.get() as u64).compact(),
                        a.compact()
                    ));
                }
            }
        }
    }
    Ok(VerifyReport {
        n,
        cases_checked: (total * total) as usize,
        violations,
    })
}
