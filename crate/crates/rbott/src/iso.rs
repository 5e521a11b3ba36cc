//! Independent brute-force decision of graded ring isomorphism.
//!
//! A graded map between these rings is pinned down by its degree-1 part
//! (all generators live in degree 1), so the search space is GL(n,2): the
//! first invertible substitution that kills every relation is returned.
//! This route never looks at the matrix moves, so it cross-validates the
//! orbit classifier.

use thiserror::Error;

use crate::bmat::BottMatrix;
use crate::cohomology::RingPresentation;
use crate::gf2::{gl_iter, Gf2Error, Gf2Matrix};

/// Exhausting GL(n,2) beyond this size is not worth the wait.
pub const ISO_SEARCH_CEILING: usize = 5;

#[derive(Debug, Error)]
pub enum IsoError {
    #[error("matrix sizes differ: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("isomorphism search supports n <= {ISO_SEARCH_CEILING}, got {0}")]
    CeilingExceeded(usize),
    #[error(transparent)]
    Gf2(#[from] Gf2Error),
}

/// A degree-1 ring isomorphism witness: x_j ↦ Σ_i P^i_j y_i.
#[derive(Clone, Debug)]
pub struct IsoWitness {
    pub map: Gf2Matrix,
}

/// Searches GL(n,2) in enumeration order for a substitution making the two
/// cohomology rings isomorphic; `None` when the rings are not isomorphic.
pub fn find_iso(a: &BottMatrix, b: &BottMatrix) -> Result<Option<IsoWitness>, IsoError> {
    if a.n() != b.n() {
        return Err(IsoError::SizeMismatch(a.n(), b.n()));
    }
    let n = a.n();
    if n > ISO_SEARCH_CEILING {
        return Err(IsoError::CeilingExceeded(n));
    }
    if n == 0 {
        return Ok(Some(IsoWitness {
            map: Gf2Matrix::zeros(0, 0),
        }));
    }
    let source = RingPresentation::new(a);
    let target = RingPresentation::new(b);
    for candidate in gl_iter(n, n.max(1))? {
        if target
            .accepts_isomorphism(&candidate, &source)
            .expect("dimensions agree by construction")
        {
            return Ok(Some(IsoWitness { map: candidate }));
        }
    }
    Ok(None)
}

/// Cheap necessary conditions for ring isomorphism, distilled from the
/// degree-1 invariants. Equal fingerprints are necessary, not sufficient.
#[derive(Clone, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub struct Fingerprint {
    /// Dimension of the nilpotent space N = {x : x² = 0}.
    pub nilpotent_dim: usize,
    /// Cardinality of S, the elements with a zero-product partner.
    pub s_count: usize,
    /// Sorted (eigen-space dimension, multiplicity) pairs over the nonzero
    /// eigen-elements.
    pub eigen_dims: Vec<(usize, usize)>,
    /// Number of distinct eigen-elements, zero included when present.
    pub eigen_count: usize,
}

impl Fingerprint {
    /// Human-readable description of the first differing field, if any,
    /// e.g. `dim N(H): 2 vs 1`.
    pub fn first_difference(&self, other: &Fingerprint) -> Option<String> {
        if self.nilpotent_dim != other.nilpotent_dim {
            return Some(format!(
                "dim N(H): {} vs {}",
                self.nilpotent_dim, other.nilpotent_dim
            ));
        }
        if self.s_count != other.s_count {
            return Some(format!("|S(H)|: {} vs {}", self.s_count, other.s_count));
        }
        if self.eigen_dims != other.eigen_dims {
            return Some(format!(
                "eigen-space dimensions: {:?} vs {:?}",
                self.eigen_dims, other.eigen_dims
            ));
        }
        if self.eigen_count != other.eigen_count {
            return Some(format!(
                "eigen-element count: {} vs {}",
                self.eigen_count, other.eigen_count
            ));
        }
        None
    }
}

impl std::fmt::Display for Fingerprint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "dimN={} |S|={} eigen_dims={:?} eigen_count={}",
            self.nilpotent_dim, self.s_count, self.eigen_dims, self.eigen_count
        )
    }
}

/// Computes the invariant tuple of one matrix's cohomology ring.
pub fn fingerprint(a: &BottMatrix) -> Fingerprint {
    let ring = RingPresentation::new(a);
    let elements = ring.eigen_elements();
    let mut dims: Vec<usize> = elements
        .iter()
        .filter(|e| !e.alpha.is_zero())
        .map(|e| ring.eigen_space(e.alpha).dim())
        .collect();
    dims.sort_unstable();
    let mut eigen_dims: Vec<(usize, usize)> = Vec::new();
    for d in dims {
        match eigen_dims.last_mut() {
            Some((dim, mult)) if *dim == d => *mult += 1,
            _ => eigen_dims.push((d, 1)),
        }
    }
    Fingerprint {
        nilpotent_dim: ring.nilpotent_space().dim(),
        s_count: ring.s_set().len(),
        eigen_dims,
        eigen_count: elements.len(),
    }
}
