//! Verification toolkit for partial S_b-metric spaces.

pub mod arith;
pub mod comparison;
pub mod contraction;
pub mod error;
pub mod fixpoint;
pub mod report;
pub mod repro;
pub mod sampling;
pub mod spaces;
pub mod topology;

pub use error::{Error, Result};
