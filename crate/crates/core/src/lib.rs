//! Spectral symbols, monotone rearrangements and spectral relative errors
//! for finite-difference and isogeometric discretizations of 1-D
//! Sturm–Liouville operators.

// negated comparisons reject NaN on purpose; index loops mirror the math
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod eigen;
pub mod error;
pub mod experiment;
pub mod fd;
pub mod iga;
pub mod matrix;
pub mod metrics;
pub mod multidim;
pub mod problem;
pub mod quadrature;
pub mod symbol;

pub use error::{Error, Result};
