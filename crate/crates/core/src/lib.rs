//! Certified computation for the double representations `c = P_m - F_n` of
//! Padovan minus Fibonacci numbers: direct search, the linear-forms bound,
//! and its Baker-Davenport reduction.

pub mod certificate;
pub mod cli;
pub mod contfrac;
pub mod error;
pub mod linforms;
pub mod realnum;
pub mod recurrences;
pub mod reduction;
pub mod search;
pub mod serde_util;

pub use error::{Error, Result};
