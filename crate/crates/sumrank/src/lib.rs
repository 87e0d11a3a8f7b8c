//! Sum-rank metric tools: finite fields, sphere counting, support
//! distributions for information-set style decoding, work-factor estimates
//! and the Hamming-to-sum-rank reduction.

pub mod codes;
pub mod counting;
pub mod decoder;
pub mod distribution;
mod error;
pub mod ffalg;
pub mod reduction;
pub mod sampling;
pub mod srspace;
pub mod workfactor;

pub use error::{Error, Result};
