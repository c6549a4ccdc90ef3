//! Exact Nielsen-type coincidence invariants of iterates for pairs of
//! self-maps of the circle, tori and the Klein bottle.
//!
//! The integer layer ([`exactint`]) is generic over [`scalar::IntScalar`];
//! everything above it works with the big-integer aliases defined here.

pub mod circle;
pub mod cli;
pub mod cyclotomic;
pub mod divisor;
pub mod error;
pub mod exactint;
pub mod geom_oracle;
pub mod invariants;
pub mod klein;
pub mod manifest;
pub mod reidemeister;
pub mod report;
pub mod scalar;

pub use error::{Error, Hypothesis, Result};

/// Unbounded signed integer.
pub type Int = num_bigint::BigInt;
/// Dense matrix of unbounded integers.
pub type IntMatrix = exactint::Matrix<Int>;
/// Full-rank sublattice of `Z^r` with unbounded entries.
pub type IntLattice = exactint::Lattice<Int>;
/// Smith decomposition over unbounded integers.
pub type Snf = exactint::SnfDecomposition<Int>;
