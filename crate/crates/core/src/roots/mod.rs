//! Root data, the standard apartment and its fundamental alcove.

pub mod alcove;
pub mod group;
pub mod lp;

pub use alcove::{AffineRoot, Alcove};
pub use group::{ApartmentPoint, GroupData, GroupKind, RootDecomposition, RootFunctional};
