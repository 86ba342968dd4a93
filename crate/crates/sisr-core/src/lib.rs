//! Attribution of a coalition payoff table to individual features.
//!
//! The crate computes conventional Shapley values and, alternatively, a
//! calibrated decomposition: a monotone transform of the payoffs together
//! with a sparse unit vector of feature scores, fitted by alternating
//! isotonic regression with hard-thresholded gradient steps.

pub mod coalition;
pub mod engine;
mod error;
pub mod isotonic;
pub mod lab;
pub(crate) mod linalg;
pub mod rng;
pub mod shapley;
pub mod sparse;

pub use error::{Result, SisrError};
