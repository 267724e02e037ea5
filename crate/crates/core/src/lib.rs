//! Design and analysis of randomized experiments on graphs under
//! interference: graph cluster randomization, exact and Monte Carlo network
//! exposure probabilities, and Horvitz-Thompson effect estimation with
//! variance diagnostics.

pub mod cli;
pub mod clustering;
pub mod error;
pub mod estimator;
pub mod experiments;
pub mod exposure;
pub mod graph;
pub mod rng;

pub use error::{Error, Result};
