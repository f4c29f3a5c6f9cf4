//! Curvature of Hermitian metrics in local complex coordinates.
//!
//! The pipeline runs from a metric definition (built-in catalog or the small
//! expression language in [`dsl`]) through its second-order jet
//! ([`metric`]), connection coefficients ([`connection`]) and curvature
//! tensors ([`curvature`]) to scalar curvatures ([`sectional`]) and the
//! classification and extremal searches in [`analysis`].

// `!(x < tol)` is used on purpose so that NaN fails checks; tensors are
// indexed by several slots at once, which reads better as range loops.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod analysis;
pub mod cli;
pub mod connection;
pub mod curvature;
pub mod dsl;
pub mod error;
pub mod metric;
pub mod sectional;
pub mod tangent;
pub mod tensor;

pub use error::{Error, Result};
