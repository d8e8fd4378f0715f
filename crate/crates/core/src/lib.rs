//! Polyhedral models of branching problems for reductive groups.
//!
//! The crate builds string cones, tensor-product cones, Levi branching cones and
//! tree fiber products of tensor cones as exact half-space descriptions, counts
//! lattice points in their bounded slices, and checks every count against an
//! independent character-theoretic oracle. Type A additionally gets
//! Berenstein–Zelevinsky triangles and their tree-shaped gluings (quilts).

pub mod bz;
pub mod cones;
pub mod error;
pub mod itrails;
pub mod lattice;
pub mod oracle;
pub mod rootsys;
pub mod weight;

pub use error::{Error, Result};
pub use rootsys::{ReducedWord, RootSystem, Q};
pub use weight::Weight;
