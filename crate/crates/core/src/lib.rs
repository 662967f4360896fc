//! Computational workbench for uniform Jordan operators `S(theta) ⊕ S(theta) ⊕ ...`
//! built from finite Blaschke products.
//!
//! The crate is organised bottom-up:
//!
//! * [`inner`]: finite Blaschke products and their divisibility lattice;
//! * [`model`]: model spaces `H(theta)`, the compressed shift and its functional calculus;
//! * [`subspace`]: orthonormal frames, invariant subspaces and projection gaps;
//! * [`jordan`]: minimal functions and Jordan models from rank sequences;
//! * [`exact`]: an exact rational backend for nilpotent operators;
//! * [`quasiaffine`]: the explicit quasiaffinity constructions;
//! * [`harness`]: orbit verification, counterexample search and file formats.

pub mod error;
pub mod exact;
pub mod harness;
pub mod inner;
pub mod jordan;
pub mod linalg;
pub mod model;
pub mod quasiaffine;
pub mod subspace;

pub use error::{Error, Result};
pub use inner::InnerFunction;
pub use jordan::JordanModel;

pub use linalg::{CMat, CVec, C64};
pub use model::ModelSpace;
pub use subspace::{AmbientSpace, SubspaceFrame};
