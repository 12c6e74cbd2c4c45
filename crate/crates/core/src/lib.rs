//! Remez- and Chebyshev-type inequalities for analytic functions.

// `!(x > 0.0)` guards are meant to reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod bounds;
pub mod error;
pub mod estimation;
pub mod function;
pub mod numeric;
pub mod rng;

pub use error::{Error, Result};
