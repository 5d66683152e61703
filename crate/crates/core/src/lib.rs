//! Certified growth constants of integer polynomial recursions
//! `x_{n+1} = P(x_n)` and the algebraic-number tools used to classify them.
//!
//! The `dioph` module scans `||q_1 a_1^n + ... + q_k a_k^n + beta|| < theta^n`
//! exactly.

pub mod algnum;
pub mod classify;
pub mod dioph;
pub mod error;
pub mod growth;
pub mod lattice;
pub mod numkernel;
pub mod recursion;
mod ser;

pub use error::{Error, Result};
