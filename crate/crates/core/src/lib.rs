//! Kernel density estimation under weak (Lipschitz-derivative) smoothness:
//! kernels with exact functionals, example densities with almost-everywhere
//! second derivatives, the KDE evaluator, a U-statistic curvature estimator,
//! bandwidth selectors, and a deterministic Monte Carlo risk harness.

pub mod bandwidth;
pub mod cli;
pub mod curvature;
pub mod densities;
pub mod error;
pub mod estimator;
pub mod kernels;
pub mod quad;
pub mod risk;

pub use error::{Error, Result};
