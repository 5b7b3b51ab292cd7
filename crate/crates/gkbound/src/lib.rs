//! Upper-bound estimates for the real and complex Grothendieck constants from
//! CCP functions, with the supporting series, matrix and Gaussian machinery.

// `!(x <= 1.0)` rejects NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bell;
pub mod ccp;
pub mod error;
pub mod gaussmc;
pub mod hermite;
pub mod matgt;
pub mod scalar;
pub mod series;
pub mod specialfn;
pub mod verify;

pub use error::{Error, Result};
