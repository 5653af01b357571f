//! Sharp trace constants on the sphere: closed forms, quadrature oracles and
//! verification reports.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod constants;
pub mod error;
pub mod extremal;
pub mod numerics;
pub mod operator;
pub mod report;
pub mod verify;

pub use constants::Problem;
pub use error::{Error, Result};
pub use num_complex;
