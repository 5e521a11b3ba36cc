//! Acceptance suite: one test per release criterion, each printing a
//! pass/fail line. Run with `cargo test --test acceptance -- --nocapture`
//! to see the lines.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rbott::affine;
use rbott::bmat::{BottMatrix, BottOperation, Permutation};
use rbott::classify::{are_equivalent, classify_all, delta_family, orbit, root_map};
use rbott::cohomology::{phi_matrix, RingPresentation, SquareFreePoly};
use rbott::config::Config;
use rbott::decomp;
use rbott::gf2::gl_iter;
use rbott::iso::find_iso;

fn cfg() -> Config {
    Config::default()
}

fn m(n: usize, entries: &[(usize, usize)]) -> BottMatrix {
    BottMatrix::from_entries(n, entries).unwrap()
}

/// Criterion 1: class counts 2 / 4 / 12 / 54 for sizes 2..=5, exact.
#[test]
fn criterion_1_class_counts() {
    let expected = [(2usize, 2usize), (3, 4), (4, 12), (5, 54)];
    let mut timings = Vec::new();
    for (n, want) in expected {
        let start = Instant::now();
        let table = classify_all(n, &cfg()).unwrap();
        let elapsed = start.elapsed();
        assert_eq!(table.class_count(), want, "class count for n={n}");
        timings.push(format!("n={n}: {want} classes in {elapsed:.2?}"));
    }
    println!(
        "criterion 1 (class counts 2/4/12/54): PASS [{}]",
        timings.join(", ")
    );
}

/// Criterion 2: the four size-3 classes are reproduced exactly as orbits.
#[test]
fn criterion_2_explicit_b3_classes() {
    let class1: HashSet<BottMatrix> = [BottMatrix::zero(3)].into_iter().collect();
    let class2: HashSet<BottMatrix> = [
        m(3, &[(1, 2)]),
        m(3, &[(1, 3)]),
        m(3, &[(2, 3)]),
        m(3, &[(1, 3), (2, 3)]),
    ]
    .into_iter()
    .collect();
    let class3: HashSet<BottMatrix> = [m(3, &[(1, 2), (1, 3)])].into_iter().collect();
    let class4: HashSet<BottMatrix> = [m(3, &[(1, 2), (2, 3)]), m(3, &[(1, 2), (1, 3), (2, 3)])]
        .into_iter()
        .collect();

    for (label, expected) in [
        ("zero", &class1),
        ("single-column", &class2),
        ("double-column", &class3),
        ("chain", &class4),
    ] {
        let representative = expected.iter().min().unwrap();
        let members: HashSet<BottMatrix> =
            orbit(representative, &cfg()).unwrap().members().collect();
        assert_eq!(&members, expected, "class {label}");
    }
    // and they exhaust the family
    let table = classify_all(3, &cfg()).unwrap();
    assert_eq!(table.class_count(), 4);
    println!("criterion 2 (explicit size-3 class membership): PASS");
}

/// Embeds a matrix into the right-low corner of a larger zero matrix.
fn embed_corner(small: &BottMatrix, n: usize) -> BottMatrix {
    BottMatrix::zero(n - small.n()).direct_sum(small)
}

/// Criterion 3: nonzero-column subfamily counts and displayed
/// representatives landing in distinct classes.
#[test]
fn criterion_3_subfamily_counts() {
    for n in [3usize, 4, 5] {
        let table = classify_all(n, &cfg()).unwrap();
        assert_eq!(
            table.count_by_nonzero_columns(1),
            1,
            "one class with 1 nonzero column, n={n}"
        );
    }
    let t3 = classify_all(3, &cfg()).unwrap();
    assert_eq!(t3.count_by_nonzero_columns(2), 2);
    for n in [4usize, 5] {
        let table = classify_all(n, &cfg()).unwrap();
        assert_eq!(table.count_by_nonzero_columns(2), 4, "n={n}");
    }

    // displayed representatives: two 3x3 corners and two 4x4 corners
    let rep_a = m(3, &[(1, 2), (1, 3)]);
    let rep_b = m(3, &[(1, 2), (2, 3)]);
    let rep_c = m(4, &[(1, 4), (2, 3), (3, 4)]);
    let rep_d = m(4, &[(1, 4), (2, 3)]);
    for n in [4usize, 5] {
        let reps: Vec<BottMatrix> = [&rep_a, &rep_b]
            .iter()
            .map(|r| embed_corner(r, n))
            .chain([&rep_c, &rep_d].iter().map(|r| embed_corner(r, n)))
            .collect();
        let canonicals: HashSet<u64> = reps
            .iter()
            .map(|r| orbit(r, &cfg()).unwrap().canonical().pack())
            .collect();
        assert_eq!(canonicals.len(), 4, "reps collapse at n={n}");
        for r in &reps {
            assert_eq!(r.nonzero_column_count(), 2);
        }
    }
    println!("criterion 3 (subfamily class counts): PASS");
}

/// Criterion 4: counts of reduced forms in the all-ones-superdiagonal
/// subfamily for n=4,5,6 follow 2^((n-2)(n-3)/2) — that is 2, 8, 64 — and
/// every class meeting the subfamily holds exactly one reduced form.
#[test]
fn criterion_4_delta_counts() {
    let start = Instant::now();
    for (n, want) in [(4usize, 2u64), (5, 8), (6, 64)] {
        let family = delta_family(n);
        let mut reduced = BTreeSet::new();
        for a in &family {
            let r = a.delta_reduce().unwrap();
            assert_eq!(r.delta_reduce().unwrap(), r, "reduction must be idempotent");
            reduced.insert(r.pack());
        }
        assert_eq!(reduced.len() as u64, want, "reduced-form count for n={n}");
        assert_eq!(want, 1 << ((n - 2) * (n - 3) / 2));

        let roots = root_map(n, &cfg()).unwrap();
        let mut per_class: HashMap<u32, BTreeSet<u64>> = HashMap::new();
        for a in &family {
            per_class
                .entry(roots[a.pack() as usize])
                .or_default()
                .insert(a.delta_reduce().unwrap().pack());
        }
        assert_eq!(
            per_class.len() as u64,
            want,
            "classes meeting the subfamily, n={n}"
        );
        for (root, forms) in &per_class {
            assert_eq!(
                forms.len(),
                1,
                "class {root} holds {} reduced forms",
                forms.len()
            );
        }
    }
    println!(
        "criterion 4 (superdiagonal subfamily counts 2/8/64): PASS [{:.2?}]",
        start.elapsed()
    );
}

/// Criterion 5: the degree-q basis of every size-4 ring counts C(4,q).
#[test]
fn criterion_5_betti_dimensions() {
    let binomials = [1u64, 4, 6, 4, 1];
    for packed in 0..64u64 {
        let ring = RingPresentation::new(&BottMatrix::unpack(4, packed));
        for (q, want) in binomials.iter().enumerate() {
            // betti() also recounts the square-free basis internally
            assert_eq!(ring.betti(q).unwrap(), *want);
        }
    }
    println!("criterion 5 (betti dimensions over the size-4 family): PASS");
}

/// Criterion 6: isomorphism search agrees with orbit equivalence on all 64
/// ordered size-3 pairs and 500 seeded random size-4 pairs.
#[test]
fn criterion_6_oracle_cross_validation() {
    let start = Instant::now();
    let c = cfg();
    for left in 0..8u64 {
        for right in 0..8u64 {
            let a = BottMatrix::unpack(3, left);
            let b = BottMatrix::unpack(3, right);
            let equivalent = are_equivalent(&a, &b, &c).unwrap().is_some();
            let isomorphic = find_iso(&a, &b).unwrap().is_some();
            assert_eq!(equivalent, isomorphic, "{a:?} vs {b:?}");
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
    for _ in 0..500 {
        let a = BottMatrix::unpack(4, rng.gen_range(0..64));
        let b = BottMatrix::unpack(4, rng.gen_range(0..64));
        let equivalent = are_equivalent(&a, &b, &c).unwrap().is_some();
        let isomorphic = find_iso(&a, &b).unwrap().is_some();
        assert_eq!(equivalent, isomorphic, "{a:?} vs {b:?}");
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs() < 300,
        "cross-validation must finish within 5 minutes"
    );
    println!(
        "criterion 6 (isomorphism oracle agrees with orbits, 64+500 pairs): PASS [{elapsed:.2?}]"
    );
}

/// Checks one move instance: exact equivariance plus the induced
/// substitution being a ring isomorphism with the documented generator
/// images.
fn check_instance(a: &BottMatrix, op: &BottOperation, samples: usize, seed: u64) {
    let n = a.n();
    let b = a
        .apply_operation(op)
        .unwrap()
        .expect("instance must be a legal move");
    let report = match op {
        BottOperation::Permute { sigma } => {
            affine::check_equivariance_op1(a, sigma, samples, seed).unwrap()
        }
        BottOperation::ColumnAdd { k } => {
            affine::check_equivariance_op2(a, *k, samples, seed).unwrap()
        }
        BottOperation::MixRows { class, c } => {
            affine::check_equivariance_op3(a, class, c, samples, seed).unwrap()
        }
    };
    assert!(
        report.passed(),
        "equivariance failed: {:?}",
        report.failures
    );

    let f = phi_matrix(a, op);
    let source = RingPresentation::new(a);
    let target = RingPresentation::new(&b);
    assert!(target.accepts_isomorphism(&f, &source).unwrap());
    // generator images match the move's substitution formula
    for j in 0..n {
        let image = target
            .pullback(&f, &SquareFreePoly::generator(n, j))
            .unwrap();
        let expected = match op {
            BottOperation::Permute { sigma } => SquareFreePoly::generator(n, sigma.apply(j)),
            BottOperation::ColumnAdd { k } => {
                if j == *k {
                    let shifted = rbott::gf2::Gf2Vector::unit(n, *k) ^ b.column(*k);
                    SquareFreePoly::from_linear(shifted)
                } else {
                    SquareFreePoly::generator(n, j)
                }
            }
            BottOperation::MixRows { class, c } => match class.iter().position(|&v| v == j) {
                None => SquareFreePoly::generator(n, j),
                Some(col) => {
                    let mut coeffs = rbott::gf2::Gf2Vector::zeros(n);
                    for (row, &i) in class.iter().enumerate() {
                        if c.get(row, col) {
                            coeffs.set(i, true);
                        }
                    }
                    SquareFreePoly::from_linear(coeffs)
                }
            },
        };
        assert_eq!(image, expected, "generator {j} image under {op}");
    }
}

/// Criterion 7: exact equivariance for every legal size-3 instance and for
/// 200 seeded random size-4 instances, each move's substitution inducing a
/// verified ring isomorphism.
#[test]
fn criterion_7_affine_equivariance() {
    let start = Instant::now();
    let c = cfg();
    let mut exhaustive = 0usize;
    for packed in 0..8u64 {
        let a = BottMatrix::unpack(3, packed);
        let basics = affine::check_commutativity_and_freeness(&a, 20, c.seed);
        assert!(basics.passed(), "{:?}", basics.failures);
        let gamma = affine::check_gamma(&a, 20, c.seed);
        assert!(gamma.passed(), "{:?}", gamma.failures);
        for sigma in Permutation::all(3) {
            if a.apply_op1(&sigma).is_some() {
                check_instance(&a, &BottOperation::Permute { sigma }, 20, c.seed);
                exhaustive += 1;
            }
        }
        for k in 0..3 {
            check_instance(&a, &BottOperation::ColumnAdd { k }, 20, c.seed);
            exhaustive += 1;
        }
        for class in a.equal_column_classes() {
            for cmat in gl_iter(class.len(), 6).unwrap() {
                if a.apply_op3(&class, &cmat).unwrap().is_some() {
                    check_instance(
                        &a,
                        &BottOperation::MixRows {
                            class: class.clone(),
                            c: cmat,
                        },
                        20,
                        c.seed,
                    );
                    exhaustive += 1;
                }
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(c.seed ^ 0x7);
    let mut sampled = 0usize;
    while sampled < 200 {
        let a = BottMatrix::unpack(4, rng.gen_range(0..64));
        let op = match rng.gen_range(0..3u8) {
            0 => {
                let mut images: Vec<usize> = (0..4).collect();
                for i in (1..4).rev() {
                    images.swap(i, rng.gen_range(0..=i));
                }
                BottOperation::Permute {
                    sigma: Permutation::new(images).unwrap(),
                }
            }
            1 => BottOperation::ColumnAdd {
                k: rng.gen_range(0..4),
            },
            _ => {
                let classes = a.equal_column_classes();
                let class = classes[rng.gen_range(0..classes.len())].clone();
                let candidates: Vec<_> = gl_iter(class.len(), 6).unwrap().collect();
                let c = candidates[rng.gen_range(0..candidates.len())].clone();
                BottOperation::MixRows { class, c }
            }
        };
        if a.apply_operation(&op).unwrap().is_none() {
            continue;
        }
        check_instance(&a, &op, 10, c.seed ^ sampled as u64);
        sampled += 1;
    }
    println!(
        "criterion 7 (exact equivariance, {exhaustive} exhaustive + {sampled} sampled instances): PASS [{:.2?}]",
        start.elapsed()
    );
}

/// Criterion 8: the factor multiset is consistent across every
/// support-disconnected orbit member of every size-5 class.
#[test]
fn criterion_8_unique_decomposition() {
    let start = Instant::now();
    let report = decomp::verify_unique_decomposition(5, &cfg()).unwrap();
    assert!(report.passed(), "violations: {:?}", report.violations);
    assert_eq!(report.cases_checked, 54);
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs() < 120,
        "suite must finish within 2 minutes"
    );
    println!("criterion 8 (unique decomposition across 54 size-5 classes): PASS [{elapsed:.2?}]");
}

/// Criterion 9: augmenting by a circle block never merges distinct size-4
/// classes.
#[test]
fn criterion_9_cancellation() {
    let report = decomp::verify_cancellation(4, &cfg()).unwrap();
    assert!(report.passed(), "violations: {:?}", report.violations);
    println!("criterion 9 (cancellation over the size-4 family): PASS");
}

/// Criterion 10: the size-6 count is not in the literature; the run must
/// complete, agree across thread counts, land between 2^6 and 2^15, and
/// refine the nonzero-column stratification.
#[test]
fn criterion_10_size_6_self_consistency() {
    let start = Instant::now();
    let single = Config {
        threads: 1,
        ..cfg()
    };
    let dual = Config {
        threads: 2,
        ..cfg()
    };
    let table_1 = classify_all(6, &single).unwrap();
    let table_2 = classify_all(6, &dual).unwrap();
    assert_eq!(table_1.class_count(), table_2.class_count());
    let rows_1: Vec<(String, u64)> = table_1
        .classes
        .iter()
        .map(|c| (c.canonical.compact(), c.size))
        .collect();
    let rows_2: Vec<(String, u64)> = table_2
        .classes
        .iter()
        .map(|c| (c.canonical.compact(), c.size))
        .collect();
    assert_eq!(
        rows_1, rows_2,
        "tables must be identical across thread counts"
    );

    let count = table_1.class_count();
    assert!(
        (64..=32768).contains(&count),
        "count {count} outside the stated bounds"
    );

    // refinement: every member of a class has the class's column count
    let roots = root_map(6, &cfg()).unwrap();
    let mut per_root: HashMap<u32, usize> = HashMap::new();
    for ix in 0..1u64 << 15 {
        let columns = BottMatrix::unpack(6, ix).nonzero_column_count();
        match per_root.entry(roots[ix as usize]) {
            std::collections::hash_map::Entry::Vacant(v) => {
                v.insert(columns);
            }
            std::collections::hash_map::Entry::Occupied(o) => {
                assert_eq!(*o.get(), columns, "stratification broken at index {ix}");
            }
        }
    }
    println!(
        "criterion 10 (size-6 self-consistency, {count} classes): PASS [{:.2?}]",
        start.elapsed()
    );
}
