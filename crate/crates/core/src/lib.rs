//! Surfaces whose angle function against a fixed direction is studied
//! through its gradient: construction, evaluation and verification.

// `!(a > b)` rejects NaN along with the failing comparison.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Quadrature nodes and weights are tabulated to published precision.
#![allow(clippy::excessive_precision)]

pub mod cpd;
pub mod error;
pub mod expr;
pub mod gallery;
pub mod geometry;
pub mod io;
pub mod numerics;
pub mod verify;

pub use error::{Error, ParseError, Result};
