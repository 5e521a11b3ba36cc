//! Classification engine for real Bott manifolds.
//!
//! A strictly upper-triangular (0,1) matrix encodes a tower of RP¹ bundles;
//! this crate decides when two such matrices present affinely diffeomorphic
//! total spaces, computes the mod-2 cohomology invariants that detect this,
//! factors a manifold into indecomposable pieces, and verifies the
//! equivariance identities behind the matrix moves with exact rational
//! arithmetic.

pub mod affine;
pub mod bmat;
pub mod classify;
pub mod cohomology;
pub mod config;
pub mod decomp;
pub mod gf2;
pub mod iso;

pub use bmat::{BottMatrix, BottOperation, Permutation};
pub use classify::{are_equivalent, classify_all, orbit, BottClass, ClassTable};
pub use config::Config;
pub use gf2::{Gf2Matrix, Gf2Vector, IntMatrix};
