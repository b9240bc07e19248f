//! Ryser designs by block complementation.
//!
//! A Ryser design on `v` points has `v` blocks, any two of which meet in
//! exactly `lambda` points, with every block larger than `lambda` and at
//! least two block sizes. The only known construction complements a
//! symmetric design with respect to one block; designs arising that way
//! are called Type-1, and the standing conjecture is that there are no
//! others.
//!
//! This crate builds such designs, computes their complete parameter
//! system with exact rational arithmetic, verifies the Gram and inverse
//! identities of the incidence matrix, applies every known Type-1 test
//! and order bound, and enumerates the parameter tuples that survive the
//! necessary conditions.

pub mod classify;
pub mod cli;
pub mod design;
pub mod error;
pub mod linalg;
pub mod params;
pub mod scan;

pub use design::{catalog, CatalogEntry, DesignKind, IncidenceStructure};
pub use error::{Error, Result};
pub use params::{BlockSignature, RyserProfile};
