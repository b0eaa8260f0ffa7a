#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

//! Bound modes of an electron on a closed one-dimensional loop containing a
//! single square or triangular potential barrier.

pub mod airy;
pub mod circuit;
pub mod constants;
pub mod error;
pub mod linalg;
pub mod oracle;
pub mod solver;
pub mod square;
pub mod triangular;

pub use circuit::{Circuit, Model};
pub use constants::{make_profile, ConstantsMode, ConstantsProfile};
pub use error::{Error, Result};
