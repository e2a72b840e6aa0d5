//! Conductors and characteristic forms of differential forms and Witt vectors with
//! poles along the divisor `t = 0` of affine space, together with an independent
//! dilatation oracle and a randomized verification harness comparing the two.
#![forbid(unsafe_code)]

pub mod algebra;
pub mod codec;
pub mod dilatation;
pub mod error;
pub mod forms;
pub mod harness;
pub mod witt;

pub use error::{Error, Result};
