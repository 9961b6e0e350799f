//! Unbiased Monte Carlo estimators for counting k-cliques, k-independent sets
//! and k-clique covers in Erdős–Rényi graphs, together with an exact analytic
//! engine for the estimators' moments and brute-force oracles that serve as
//! ground truth.
//!
//! The crate is organised in four layers:
//!
//! * [`graph`]: immutable bitset graphs, seeded `G(n,p)` generation and the
//!   edge-list file format.
//! * [`estimators`]: the single-run embedding kernels, the log-domain
//!   [`ScaledValue`](estimators::ScaledValue) and the ε/δ sampling driver.
//! * [`oracles`]: exact, exponential-time counters.
//! * [`analytic`]: Stirling coefficients, binomial moments, nesting values,
//!   critical ratios and the associated bound functions, all in exact
//!   rational arithmetic where they are identities.

pub mod analytic;
pub mod error;
pub mod estimators;
pub mod graph;
pub mod oracles;
pub mod prob;

pub use error::{Error, Result};
pub use graph::{Graph, VertexSet};
pub use prob::EdgeProb;
