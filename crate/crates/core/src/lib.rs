//! High-precision computations for indeterminate Hamburger and Stieltjes
//! moment problems: orthonormal polynomials from moments, the Nevanlinna
//! matrix, N-extremal solutions, determinacy tests and explicit families.

// `!(x > 0)` style tests are meant to reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod families;
pub mod harness;
pub mod numerics;
pub mod measures;
pub mod moments;
pub mod nevanlinna;
pub mod qcalc;

pub use error::{Error, Result};
pub use numerics::PrecisionContext;
