//! Unitary duals of lattice-by-finite-group extensions.
//!
//! The crate computes, for a crystallographic-type group `1 → Zⁿ → G → K → 1`,
//! the set of pairs `(z, σ)` with `z` a point of the dual torus and `σ` an
//! irreducible projective representation of its stabilizer twisted by the
//! Mackey obstruction at `z`, together with the sequence-convergence rule
//! that topologizes that set. Exact cyclotomic arithmetic backs every
//! certified answer; a floating-point oracle cross-checks the structural
//! identities on finite instances.

pub mod chartab;
pub mod crystal;
pub mod error;
pub mod exactnum;
pub mod fixoracle;
pub mod groups;
mod linalg;
pub mod selftest;
pub mod spectrum;
pub mod twisted;
pub mod verify;

pub use error::{Error, Result};
