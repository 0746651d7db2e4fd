//! Exact slopes and fundamental strata of formal flat G-bundles.
//!
//! A connection `d + A dz/z` on the punctured formal disk is given by a
//! Lie-algebra-valued Laurent polynomial matrix `A` for one of the classical
//! groups `GL_n`, `SL_n`, `Sp_2n`. The library computes its slope exactly,
//! cross-checked by a Newton-polygon oracle, and searches for a certified
//! fundamental stratum at an optimal point of the standard apartment.

pub mod cli;
pub mod error;
pub mod exact;
pub mod families;
pub mod filtration;
pub mod roots;
pub mod slope;
pub mod strata;

pub use error::{Error, Result};
