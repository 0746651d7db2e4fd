//! Exact arithmetic substrate: rationals, Laurent polynomials and matrices of
//! them, dense rational linear algebra, and precision-tracked series.

pub mod laurent;
pub mod linalg;
pub mod matrix;
pub mod rational;
pub mod series;

pub use laurent::{LaurentScalar, Valuation};
pub use linalg::QMatrix;
pub use matrix::LaurentMatrix;
pub use rational::{format_rational, int, parse_rational, rat, Rational};
pub use series::Series;
