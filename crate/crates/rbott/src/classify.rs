//! Orbit enumeration under the three moves, canonical representatives, and
//! whole-family class tables.
//!
//! The canonical form of a class is the lexicographic minimum of the packed
//! upper-triangle encoding over its members; it carries no meaning beyond
//! determinism. Whole-family classification runs a union-find over all
//! 2^(n(n-1)/2) packed indices with edges generated per matrix.
//!
//! Edge generation: every permutation whose conjugate stays triangular, every
//! column move, and per equal-column class every transvection mix (these
//! generate the full invertible group; a class stays a full class under any
//! invertible mix, so composites reach everything full enumeration would).
//! A mixed image that leaves the triangular family is conjugated back in by
//! the deterministic topological sort of its support digraph, which realizes
//! the same equivalence on the family.

use std::collections::hash_map::Entry;
use std::collections::HashMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use thiserror::Error;

use crate::bmat::{
    apply_operation_union, triangularizing_permutation, BmatError, BottMatrix, BottOperation,
    Permutation,
};
use crate::config::Config;
use crate::gf2::Gf2Matrix;

#[derive(Debug, Error)]
pub enum ClassifyError {
    #[error("size {n} above the configured ceiling {max}")]
    CeilingExceeded { n: usize, max: usize },
    #[error("orbit enumeration exceeded the {budget}-byte memory budget")]
    MemoryBudget { budget: usize },
    #[error("matrix sizes differ: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("bad class table: {0}")]
    BadTable(String),
    #[error(transparent)]
    Matrix(#[from] BmatError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// One equivalence class: canonical member, cardinality, optionally the
/// full member list.
#[derive(Clone, Debug)]
pub struct BottClass {
    pub canonical: BottMatrix,
    pub size: u64,
    pub members: Option<Vec<BottMatrix>>,
}

/// Classes of the whole size-n family, ordered by canonical representative.
#[derive(Clone, Debug)]
pub struct ClassTable {
    pub n: usize,
    pub classes: Vec<BottClass>,
    pub provenance: String,
}

impl ClassTable {
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    /// Number of classes whose members have exactly k nonzero columns (the
    /// count is a class invariant, checked at classification time).
    pub fn count_by_nonzero_columns(&self, k: usize) -> usize {
        self.classes
            .iter()
            .filter(|c| c.canonical.nonzero_column_count() == k)
            .count()
    }
}

/// Per-edge move labels, borrowed from the generator's scratch space.
enum Edge<'a> {
    Permute(&'a Permutation),
    ColumnAdd(usize),
    MixRows {
        class: &'a [usize],
        c: &'a Gf2Matrix,
    },
    /// Mixing left the family; sigma conjugates the stray image back in.
    MixRowsThenPermute {
        class: &'a [usize],
        c: &'a Gf2Matrix,
        sigma: Permutation,
    },
}

impl Edge<'_> {
    fn to_operations(&self) -> Vec<BottOperation> {
        match self {
            Edge::Permute(sigma) => vec![BottOperation::Permute {
                sigma: (*sigma).clone(),
            }],
            Edge::ColumnAdd(k) => vec![BottOperation::ColumnAdd { k: *k }],
            Edge::MixRows { class, c } => vec![BottOperation::MixRows {
                class: class.to_vec(),
                c: (*c).clone(),
            }],
            Edge::MixRowsThenPermute { class, c, sigma } => vec![
                BottOperation::MixRows {
                    class: class.to_vec(),
                    c: (*c).clone(),
                },
                BottOperation::Permute {
                    sigma: sigma.clone(),
                },
            ],
        }
    }
}

/// Precomputed per-size scratch for edge generation.
struct EdgeGenerator {
    n: usize,
    permutations: Vec<Permutation>,
    /// Transvection mixes per class size: identity plus one off-diagonal 1.
    transvections: Vec<Vec<Gf2Matrix>>,
}

impl EdgeGenerator {
    fn new(n: usize) -> Self {
        let permutations: Vec<Permutation> = Permutation::all(n).collect();
        let mut transvections = Vec::with_capacity(n + 1);
        for size in 0..=n {
            let mut mixes = Vec::new();
            for r in 0..size {
                for s in 0..size {
                    if r != s {
                        let mut c = Gf2Matrix::identity(size);
                        c.set(r, s, true);
                        mixes.push(c);
                    }
                }
            }
            transvections.push(mixes);
        }
        EdgeGenerator {
            n,
            permutations,
            transvections,
        }
    }

    /// Calls `visit` for every generator edge out of `a`.
    fn for_each_edge<F: FnMut(BottMatrix, Edge<'_>)>(&self, a: &BottMatrix, mut visit: F) {
        for sigma in &self.permutations {
            if let Some(b) = a.apply_op1(sigma) {
                visit(b, Edge::Permute(sigma));
            }
        }
        for k in 0..self.n {
            visit(a.apply_op2(k), Edge::ColumnAdd(k));
        }
        for class in a.equal_column_classes() {
            for c in &self.transvections[class.len()] {
                let rows = a.mix_rows_raw(&class, c);
                match BottMatrix::from_rows(rows.clone()) {
                    Ok(b) => visit(b, Edge::MixRows { class: &class, c }),
                    Err(_) => {
                        let raw = Gf2Matrix::from_rows(rows).expect("rows share one dimension");
                        let sigma = triangularizing_permutation(&raw)
                            .expect("mixed image must stay conjugate to the family");
                        let back = apply_operation_union(
                            &raw,
                            &BottOperation::Permute {
                                sigma: sigma.clone(),
                            },
                        )
                        .expect("conjugation is total");
                        let b = BottMatrix::from_rows(back.rows().to_vec())
                            .expect("topological order restores triangularity");
                        visit(
                            b,
                            Edge::MixRowsThenPermute {
                                class: &class,
                                c,
                                sigma,
                            },
                        );
                    }
                }
            }
        }
    }
}

/// BFS closure of one matrix under the generator edges, with parent links
/// for witness recovery.
pub struct Orbit {
    n: usize,
    start: u64,
    /// packed index -> (parent index, edge ops from parent)
    parents: HashMap<u64, Option<(u64, Vec<BottOperation>)>>,
    order: Vec<u64>,
}

impl Orbit {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn contains(&self, b: &BottMatrix) -> bool {
        b.n() == self.n && self.parents.contains_key(&b.pack())
    }

    /// Members in discovery order.
    pub fn members(&self) -> impl Iterator<Item = BottMatrix> + '_ {
        self.order.iter().map(|&ix| BottMatrix::unpack(self.n, ix))
    }

    pub fn canonical(&self) -> BottMatrix {
        let min = self.order.iter().min().expect("orbit is never empty");
        BottMatrix::unpack(self.n, *min)
    }

    /// Move sequence from the start matrix to `b`, empty when `b` is the
    /// start; `None` when `b` is not a member.
    pub fn witness_to(&self, b: &BottMatrix) -> Option<Vec<BottOperation>> {
        if b.n() != self.n {
            return None;
        }
        let mut cursor = b.pack();
        let mut segments = Vec::new();
        loop {
            match self.parents.get(&cursor)? {
                None => break,
                Some((parent, ops)) => {
                    segments.push(ops.clone());
                    cursor = *parent;
                }
            }
        }
        debug_assert_eq!(cursor, self.start);
        Some(segments.into_iter().rev().flatten().collect())
    }

    pub fn to_class(&self) -> BottClass {
        let mut member_list: Vec<BottMatrix> = self.members().collect();
        member_list.sort();
        BottClass {
            canonical: self.canonical(),
            size: self.order.len() as u64,
            members: Some(member_list),
        }
    }
}

/// Rough per-member footprint of orbit bookkeeping, for the memory budget.
const ORBIT_ENTRY_ESTIMATE: usize = 160;

/// Enumerates the full equivalence orbit of `a`.
pub fn orbit(a: &BottMatrix, cfg: &Config) -> Result<Orbit, ClassifyError> {
    let n = a.n();
    let generator = EdgeGenerator::new(n);
    let start = a.pack();
    let mut parents: HashMap<u64, Option<(u64, Vec<BottOperation>)>> = HashMap::new();
    parents.insert(start, None);
    let mut order = vec![start];
    let mut frontier = vec![start];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for &ix in &frontier {
            let current = BottMatrix::unpack(n, ix);
            let mut overflow = false;
            generator.for_each_edge(&current, |b, edge| {
                let packed = b.pack();
                if let Entry::Vacant(slot) = parents.entry(packed) {
                    slot.insert(Some((ix, edge.to_operations())));
                    order.push(packed);
                    next.push(packed);
                }
                if parents.len() * ORBIT_ENTRY_ESTIMATE > cfg.orbit_memory_budget {
                    overflow = true;
                }
            });
            if overflow {
                return Err(ClassifyError::MemoryBudget {
                    budget: cfg.orbit_memory_budget,
                });
            }
        }
        frontier = next;
    }
    Ok(Orbit {
        n,
        start,
        parents,
        order,
    })
}

/// Decides equivalence; on success returns the move sequence from `a` to `b`
/// (empty for `a == b`).
pub fn are_equivalent(
    a: &BottMatrix,
    b: &BottMatrix,
    cfg: &Config,
) -> Result<Option<Vec<BottOperation>>, ClassifyError> {
    if a.n() != b.n() {
        return Err(ClassifyError::SizeMismatch(a.n(), b.n()));
    }
    let orb = orbit(a, cfg)?;
    Ok(orb.witness_to(b))
}

/// Replays a witness, permitting intermediates outside the triangular family
/// as long as they stay inside its permutation-conjugate union; true iff the
/// replay lands exactly on `b`.
pub fn verify_witness(
    a: &BottMatrix,
    ops: &[BottOperation],
    b: &BottMatrix,
) -> Result<bool, BmatError> {
    let mut current = a.to_gf2();
    for op in ops {
        current = apply_operation_union(&current, op)?;
        if !crate::bmat::principal_minor_check(&current)? {
            return Ok(false);
        }
    }
    Ok(current == b.to_gf2())
}

struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    fn new(len: usize) -> Self {
        UnionFind {
            parent: (0..len as u32).collect(),
        }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let grandparent = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = grandparent;
            x = grandparent;
        }
        x
    }

    /// Keeps the smaller index as root so canonical extraction is a plain min.
    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.parent[hi as usize] = lo;
        }
    }
}

/// Classifies the whole size-n family into equivalence classes.
///
/// Deterministic: the resulting table is identical across runs and worker
/// counts (the union-find partition does not depend on merge order, and
/// canonical representatives are index minima).
pub fn classify_all(n: usize, cfg: &Config) -> Result<ClassTable, ClassifyError> {
    if n > cfg.max_n || n * n.saturating_sub(1) / 2 > 31 {
        return Err(ClassifyError::CeilingExceeded { n, max: cfg.max_n });
    }
    let m = n * n.saturating_sub(1) / 2;
    let total: u64 = 1 << m;
    let generator = EdgeGenerator::new(n);
    let mut uf = UnionFind::new(total as usize);

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .expect("thread pool construction");
    const CHUNK: u64 = 512;
    pool.install(|| {
        use rayon::prelude::*;
        let mut begin = 0u64;
        while begin < total {
            let end = (begin + CHUNK).min(total);
            let edges: Vec<Vec<(u32, u32)>> = (begin..end)
                .into_par_iter()
                .map(|ix| {
                    let a = BottMatrix::unpack(n, ix);
                    let mut out = Vec::new();
                    generator.for_each_edge(&a, |b, _| {
                        let target = b.pack();
                        if target != ix {
                            out.push((ix as u32, target as u32));
                        }
                    });
                    out
                })
                .collect();
            for chunk in edges {
                for (a, b) in chunk {
                    uf.union(a, b);
                }
            }
            begin = end;
        }
    });

    // canonical = minimal member index; with min-rooted unions that is the root
    let mut sizes: HashMap<u32, u64> = HashMap::new();
    let mut column_counts: HashMap<u32, usize> = HashMap::new();
    for ix in 0..total {
        let root = uf.find(ix as u32);
        *sizes.entry(root).or_insert(0) += 1;
        let count = BottMatrix::unpack(n, ix).nonzero_column_count();
        match column_counts.entry(root) {
            Entry::Vacant(slot) => {
                slot.insert(count);
            }
            Entry::Occupied(existing) => {
                assert_eq!(
                    *existing.get(),
                    count,
                    "nonzero-column count must be constant on each class"
                );
            }
        }
    }
    let mut roots: Vec<u32> = sizes.keys().copied().collect();
    roots.sort_unstable();
    let classes: Vec<BottClass> = roots
        .iter()
        .map(|&root| BottClass {
            canonical: BottMatrix::unpack(n, root as u64),
            size: sizes[&root],
            members: None,
        })
        .collect();
    let total_check: u64 = classes.iter().map(|c| c.size).sum();
    assert_eq!(
        total_check, total,
        "class sizes must sum to the family size"
    );
    Ok(ClassTable {
        n,
        classes,
        provenance: format!("generators=full rbott={}", env!("CARGO_PKG_VERSION")),
    })
}

/// Writes a class table in the TSV cache format.
pub fn write_table(table: &ClassTable, path: &Path) -> Result<(), ClassifyError> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    let mut out = fs::File::create(path)?;
    writeln!(out, "# bott-classes n={} generators=full", table.n)?;
    for class in &table.classes {
        writeln!(out, "{}\t{}", class.canonical.compact(), class.size)?;
    }
    Ok(())
}

/// Reads a class table previously written by [`write_table`].
pub fn read_table(path: &Path) -> Result<ClassTable, ClassifyError> {
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| ClassifyError::BadTable("empty file".into()))?;
    let n: usize = header
        .strip_prefix("# bott-classes n=")
        .and_then(|rest| rest.split_whitespace().next())
        .and_then(|tok| tok.parse().ok())
        .ok_or_else(|| ClassifyError::BadTable(format!("bad header {header:?}")))?;
    let mut classes = Vec::new();
    for line in lines {
        if line.is_empty() {
            continue;
        }
        let (compact, size) = line
            .split_once('\t')
            .ok_or_else(|| ClassifyError::BadTable(format!("bad row {line:?}")))?;
        let canonical = BottMatrix::from_compact(compact)
            .map_err(|e| ClassifyError::BadTable(format!("bad canonical {compact:?}: {e}")))?;
        if canonical.n() != n {
            return Err(ClassifyError::BadTable(format!(
                "row size {} does not match header n={n}",
                canonical.n()
            )));
        }
        let size: u64 = size
            .parse()
            .map_err(|_| ClassifyError::BadTable(format!("bad size {size:?}")))?;
        classes.push(BottClass {
            canonical,
            size,
            members: None,
        });
    }
    Ok(ClassTable {
        n,
        classes,
        provenance: "loaded from cache".into(),
    })
}

/// Maps every packed index of the size-n family to its class root (the
/// packed canonical form). Shares the classification machinery; useful for
/// bulk verification suites.
pub fn root_map(n: usize, cfg: &Config) -> Result<Vec<u32>, ClassifyError> {
    if n > cfg.max_n || n * n.saturating_sub(1) / 2 > 31 {
        return Err(ClassifyError::CeilingExceeded { n, max: cfg.max_n });
    }
    let m = n * n.saturating_sub(1) / 2;
    let total: u64 = 1 << m;
    let generator = EdgeGenerator::new(n);
    let mut uf = UnionFind::new(total as usize);
    for ix in 0..total {
        let a = BottMatrix::unpack(n, ix);
        generator.for_each_edge(&a, |b, _| {
            uf.union(ix as u32, b.pack() as u32);
        });
    }
    Ok((0..total).map(|ix| uf.find(ix as u32)).collect())
}

/// All matrices of the size-n family whose superdiagonal is all ones.
pub fn delta_family(n: usize) -> Vec<BottMatrix> {
    assert!(n >= 2);
    let free = (n - 1) * (n - 2) / 2;
    let mut out = Vec::with_capacity(1 << free);
    for bits in 0u64..1 << free {
        let mut entries: Vec<(usize, usize)> = (0..n - 1).map(|i| (i + 1, i + 2)).collect();
        let mut t = 0;
        for i in 0..n {
            for j in i + 2..n {
                if bits >> t & 1 == 1 {
                    entries.push((i + 1, j + 1));
                }
                t += 1;
            }
        }
        out.push(BottMatrix::from_entries(n, &entries).unwrap());
    }
    out
}
