//! Exact rational verification of the torus actions and the equivariant
//! affine maps attached to the three moves.
//!
//! Points of the n-torus carry exact rational coordinates in [0,1); the
//! circle coordinate z = exp(2πi·u) dictionary turns conjugation into
//! negation, -z into u + 1/2, and i·z into u + 1/4. Every identity checked
//! here is an exact equality of rational vectors, so any failure is a hard
//! counterexample rather than numerical noise.
//!
//! Freeness is only spot-checked on generic points: coordinates with reduced
//! denominator at least 8 (in particular never 0, 1/4, 1/2 or 3/4), because
//! sign maps fix the special points. The commutativity and equivariance
//! identities hold exactly on every sampled point.

use num_rational::Rational64;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::bmat::{BmatError, BottMatrix, Permutation};
use crate::gf2::{lift_to_integers, Gf2Error, Gf2Matrix, Gf2Vector, IntMatrix};

#[derive(Debug, Error)]
pub enum AffineError {
    #[error("coordinate denominator {0} exceeds the configured limit {1}")]
    DenominatorLimit(i64, u64),
    #[error("point has {0} coordinates, expected {1}")]
    SizeMismatch(usize, usize),
    #[error("the move is not legal from this matrix")]
    IllegalMove,
    #[error(transparent)]
    Matrix(#[from] BmatError),
    #[error(transparent)]
    Gf2(#[from] Gf2Error),
}

/// Reduces a rational to the fundamental domain [0,1).
fn mod1(r: Rational64) -> Rational64 {
    r - r.floor()
}

/// A point of the n-torus with exact rational coordinates in [0,1).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RationalTorusPoint {
    coords: Vec<Rational64>,
}

impl RationalTorusPoint {
    /// Reduces the coordinates mod 1 and enforces the denominator limit.
    pub fn new(coords: Vec<Rational64>, denominator_limit: u64) -> Result<Self, AffineError> {
        let coords: Vec<Rational64> = coords.into_iter().map(mod1).collect();
        for c in &coords {
            let d = *c.denom();
            if d.unsigned_abs() > denominator_limit {
                return Err(AffineError::DenominatorLimit(d, denominator_limit));
            }
        }
        Ok(RationalTorusPoint { coords })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Rational64] {
        &self.coords
    }
}

/// An element of the rank-n involution group, as an exponent vector over
/// the generators.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct GroupElement {
    pub exponents: Gf2Vector,
}

impl GroupElement {
    pub fn identity(n: usize) -> Self {
        GroupElement {
            exponents: Gf2Vector::zeros(n),
        }
    }

    pub fn generator(n: usize, i: usize) -> Self {
        GroupElement {
            exponents: Gf2Vector::unit(n, i),
        }
    }

    pub fn all(n: usize) -> impl Iterator<Item = GroupElement> {
        (0u64..1 << n).map(move |bits| GroupElement {
            exponents: Gf2Vector::from_bits(n, bits).unwrap(),
        })
    }
}

/// Action of one generator on a point: the i-th coordinate shifts by 1/2 and
/// every later coordinate selected by row i flips sign.
fn generator_action(a: &BottMatrix, i: usize, point: &[Rational64]) -> Vec<Rational64> {
    let half = Rational64::new(1, 2);
    point
        .iter()
        .enumerate()
        .map(|(j, &u)| {
            if j == i {
                mod1(u + half)
            } else if j > i && a.get(i, j) {
                mod1(-u)
            } else {
                u
            }
        })
        .collect()
}

/// Exact action of a group element: generators applied in ascending order
/// (they commute, which `check_commutativity_and_freeness` verifies).
pub fn act(a: &BottMatrix, g: GroupElement, z: &RationalTorusPoint) -> RationalTorusPoint {
    assert_eq!(z.dim(), a.n());
    let mut coords = z.coords.clone();
    for i in g.exponents.support() {
        coords = generator_action(a, i, &coords);
    }
    RationalTorusPoint { coords }
}

/// A Euclidean motion u ↦ sign·u + t acting coordinatewise on R^n.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EuclideanMotion {
    /// true = the coordinate flips sign.
    pub flips: Vec<bool>,
    pub translation: Vec<Rational64>,
}

impl EuclideanMotion {
    pub fn identity(n: usize) -> Self {
        EuclideanMotion {
            flips: vec![false; n],
            translation: vec![Rational64::zero(); n],
        }
    }

    /// The i-th standard motion of the crystallographic presentation: shift
    /// coordinate i by 1/2, flip the later coordinates selected by row i.
    pub fn standard_generator(a: &BottMatrix, i: usize) -> Self {
        let n = a.n();
        let mut motion = Self::identity(n);
        motion.translation[i] = Rational64::new(1, 2);
        for j in i + 1..n {
            if a.get(i, j) {
                motion.flips[j] = true;
            }
        }
        motion
    }

    pub fn apply(&self, u: &[Rational64]) -> Vec<Rational64> {
        u.iter()
            .zip(&self.flips)
            .zip(&self.translation)
            .map(|((&x, &flip), &t)| if flip { -x + t } else { x + t })
            .collect()
    }

    /// self ∘ other.
    pub fn compose(&self, other: &EuclideanMotion) -> EuclideanMotion {
        let flips = self
            .flips
            .iter()
            .zip(&other.flips)
            .map(|(&a, &b)| a != b)
            .collect();
        let translation = self
            .translation
            .iter()
            .zip(&other.translation)
            .zip(&self.flips)
            .map(|((&ts, &to), &flip)| if flip { -to + ts } else { to + ts })
            .collect();
        EuclideanMotion { flips, translation }
    }

    /// True iff the motion is translation by exactly the given integer vector.
    pub fn is_integer_translation(&self, target: &[i64]) -> bool {
        self.flips.iter().all(|&f| !f)
            && self
                .translation
                .iter()
                .zip(target)
                .all(|(t, &w)| *t == Rational64::from_integer(w))
    }
}

/// Outcome of one exact check: how many cases ran and which failed.
#[derive(Clone, Debug)]
pub struct CheckReport {
    pub label: String,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Deterministic generic sample points: every coordinate has an odd
/// numerator over a denominator 8, 16 or 32, so no coordinate lies in
/// {0, 1/4, 1/2, 3/4} and sign maps move every sampled point.
pub fn sample_points(n: usize, count: usize, seed: u64) -> Vec<RationalTorusPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let coords = (0..n)
                .map(|_| {
                    let power = rng.gen_range(3..=5u32);
                    let denom = 1i64 << power;
                    let numer = 2 * rng.gen_range(0..denom / 2) + 1;
                    Rational64::new(numer, denom)
                })
                .collect();
            RationalTorusPoint::new(coords, 1 << 20).expect("sampled denominators are tiny")
        })
        .collect()
}

/// Verifies that the generators commute pairwise and that no nontrivial
/// element fixes any sampled generic point.
pub fn check_commutativity_and_freeness(a: &BottMatrix, samples: usize, seed: u64) -> CheckReport {
    let n = a.n();
    let points = sample_points(n, samples, seed);
    let mut cases = 0;
    let mut failures = Vec::new();
    for z in &points {
        for i in 0..n {
            for j in i + 1..n {
                cases += 1;
                let ij = act(
                    a,
                    GroupElement::generator(n, j),
                    &act(a, GroupElement::generator(n, i), z),
                );
                let ji = act(
                    a,
                    GroupElement::generator(n, i),
                    &act(a, GroupElement::generator(n, j), z),
                );
                if ij != ji {
                    failures.push(format!(
                        "generators {} and {} do not commute at {:?}",
                        i + 1,
                        j + 1,
                        z.coords
                    ));
                }
            }
        }
        for g in GroupElement::all(n) {
            if g.exponents.is_zero() {
                continue;
            }
            cases += 1;
            if act(a, g, z) == *z {
                failures.push(format!("{:?} fixes {:?}", g.exponents, z.coords));
            }
        }
    }
    CheckReport {
        label: format!("commutativity+freeness n={n}"),
        cases,
        failures,
    }
}

/// Verifies the crystallographic presentation: squared generators are the
/// standard integer translations, the induced torus maps agree with the
/// group action, and the induced maps commute mod Z^n.
pub fn check_gamma(a: &BottMatrix, samples: usize, seed: u64) -> CheckReport {
    let n = a.n();
    let points = sample_points(n, samples, seed);
    let mut cases = 0;
    let mut failures = Vec::new();
    for i in 0..n {
        cases += 1;
        let s = EuclideanMotion::standard_generator(a, i);
        let squared = s.compose(&s);
        let mut expected = vec![0i64; n];
        expected[i] = 1;
        if !squared.is_integer_translation(&expected) {
            failures.push(format!(
                "generator {} squared is not the unit translation",
                i + 1
            ));
        }
    }
    for z in &points {
        for i in 0..n {
            cases += 1;
            let s = EuclideanMotion::standard_generator(a, i);
            let projected: Vec<Rational64> = s.apply(z.coords()).into_iter().map(mod1).collect();
            let direct = act(a, GroupElement::generator(n, i), z);
            if projected != direct.coords {
                failures.push(format!(
                    "motion {} disagrees with the torus action at {:?}",
                    i + 1,
                    z.coords
                ));
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                cases += 1;
                let si = EuclideanMotion::standard_generator(a, i);
                let sj = EuclideanMotion::standard_generator(a, j);
                let ij: Vec<Rational64> = si
                    .compose(&sj)
                    .apply(z.coords())
                    .into_iter()
                    .map(mod1)
                    .collect();
                let ji: Vec<Rational64> = sj
                    .compose(&si)
                    .apply(z.coords())
                    .into_iter()
                    .map(mod1)
                    .collect();
                if ij != ji {
                    failures.push(format!(
                        "motions {} and {} do not commute mod 1 at {:?}",
                        i + 1,
                        j + 1,
                        z.coords
                    ));
                }
            }
        }
    }
    CheckReport {
        label: format!("crystallographic presentation n={n}"),
        cases,
        failures,
    }
}

/// The exponent vector of the image of the i-th target generator under the
/// group map attached to a move, i.e. row i of the substitution matrix.
fn phi_row(f: &Gf2Matrix, i: usize) -> GroupElement {
    GroupElement {
        exponents: f.row(i),
    }
}

fn equivariance_failures(
    a: &BottMatrix,
    b: &BottMatrix,
    f: &Gf2Matrix,
    forward: impl Fn(&[Rational64]) -> Vec<Rational64>,
    points: &[RationalTorusPoint],
    failures: &mut Vec<String>,
) -> usize {
    let n = a.n();
    let mut cases = 0;
    for z in points {
        for i in 0..n {
            cases += 1;
            let moved = act(b, GroupElement::generator(n, i), z);
            let lhs: Vec<Rational64> = forward(moved.coords()).into_iter().map(mod1).collect();
            let mapped = RationalTorusPoint {
                coords: forward(z.coords()).into_iter().map(mod1).collect(),
            };
            let rhs = act(a, phi_row(f, i), &mapped);
            if lhs != rhs.coords {
                failures.push(format!(
                    "generator {} at {:?}: {:?} vs {:?}",
                    i + 1,
                    z.coords,
                    lhs,
                    rhs.coords
                ));
            }
        }
    }
    cases
}

/// Checks the permutation move's torus map z ↦ (z_{σ(1)},..,z_{σ(n)})
/// against the group map sending the σ(i)-th target generator to the i-th.
pub fn check_equivariance_op1(
    a: &BottMatrix,
    sigma: &Permutation,
    samples: usize,
    seed: u64,
) -> Result<CheckReport, AffineError> {
    let b = a.apply_op1(sigma).ok_or(AffineError::IllegalMove)?;
    let op = crate::bmat::BottOperation::Permute {
        sigma: sigma.clone(),
    };
    let f = crate::cohomology::phi_matrix(a, &op);
    debug_assert_eq!(f.rank(), a.n());
    let points = sample_points(a.n(), samples, seed);
    let mut failures = Vec::new();
    let cases = equivariance_failures(
        a,
        &b,
        &f,
        |u| (0..a.n()).map(|j| u[sigma.apply(j)]).collect(),
        &points,
        &mut failures,
    );
    Ok(CheckReport {
        label: format!("op1 equivariance sigma={sigma:?}"),
        cases,
        failures,
    })
}

/// Checks the column move's torus map (a quarter turn in coordinate k)
/// against the group map b_i ↦ a_i·a_k^{A^i_k}.
pub fn check_equivariance_op2(
    a: &BottMatrix,
    k: usize,
    samples: usize,
    seed: u64,
) -> Result<CheckReport, AffineError> {
    if k >= a.n() {
        return Err(AffineError::Matrix(BmatError::IndexOutOfRange(
            k + 1,
            a.n(),
        )));
    }
    let b = a.apply_op2(k);
    let op = crate::bmat::BottOperation::ColumnAdd { k };
    let f = crate::cohomology::phi_matrix(a, &op);
    debug_assert_eq!(f.rank(), a.n());
    let quarter = Rational64::new(1, 4);
    let points = sample_points(a.n(), samples, seed);
    let mut failures = Vec::new();
    let cases = equivariance_failures(
        a,
        &b,
        &f,
        |u| {
            let mut out = u.to_vec();
            out[k] += quarter;
            out
        },
        &points,
        &mut failures,
    );
    Ok(CheckReport {
        label: format!("op2 equivariance k={}", k + 1),
        cases,
        failures,
    })
}

/// Checks the row-mix move's torus map z_j ↦ Π z_ℓ^(C̃^ℓ_j) (an integer
/// linear map on coordinates, via a unimodular lift of C) against the group
/// map b_i ↦ Π a_k^(C^i_k).
pub fn check_equivariance_op3(
    a: &BottMatrix,
    class: &[usize],
    c: &Gf2Matrix,
    samples: usize,
    seed: u64,
) -> Result<CheckReport, AffineError> {
    let b = a.apply_op3(class, c)?.ok_or(AffineError::IllegalMove)?;
    let lift: IntMatrix = lift_to_integers(c)?;
    let op = crate::bmat::BottOperation::MixRows {
        class: class.to_vec(),
        c: c.clone(),
    };
    let f = crate::cohomology::phi_matrix(a, &op);
    debug_assert_eq!(f.rank(), a.n());
    let points = sample_points(a.n(), samples, seed);
    let mut failures = Vec::new();
    let cases = equivariance_failures(
        a,
        &b,
        &f,
        |u| {
            let mut out = u.to_vec();
            for (col, &j) in class.iter().enumerate() {
                let mut acc = Rational64::zero();
                for (row, &l) in class.iter().enumerate() {
                    let e = lift.get(row, col);
                    if e != 0 {
                        acc += Rational64::from_integer(e) * u[l];
                    }
                }
                out[j] = acc;
            }
            out
        },
        &points,
        &mut failures,
    );
    Ok(CheckReport {
        label: format!(
            "op3 equivariance I={{{}}}",
            class
                .iter()
                .map(|i| (i + 1).to_string())
                .collect::<Vec<_>>()
                .join(",")
        ),
        cases,
        failures,
    })
}

/// Runs every equivariance check available from one matrix: all legal
/// permutations, all column moves, and all row mixes over each class
/// (transvections when the class is large, the full group otherwise).
pub fn check_all_moves(
    a: &BottMatrix,
    samples: usize,
    seed: u64,
    gl_ceiling: usize,
) -> Result<Vec<CheckReport>, AffineError> {
    let n = a.n();
    let mut reports = vec![
        check_commutativity_and_freeness(a, samples, seed),
        check_gamma(a, samples, seed),
    ];
    for sigma in Permutation::all(n) {
        if a.apply_op1(&sigma).is_some() {
            reports.push(check_equivariance_op1(a, &sigma, samples, seed)?);
        }
    }
    for k in 0..n {
        reports.push(check_equivariance_op2(a, k, samples, seed)?);
    }
    for class in a.equal_column_classes() {
        if class.len() <= gl_ceiling {
            for c in crate::gf2::gl_iter(class.len(), gl_ceiling)? {
                if a.apply_op3(&class, &c)?.is_some() {
                    reports.push(check_equivariance_op3(a, &class, &c, samples, seed)?);
                }
            }
        }
    }
    Ok(reports)
}
