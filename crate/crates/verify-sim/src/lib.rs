//! Exact verification of finite-memory strategies, plus a seeded simulator.
//!
//! Verification answers the two-sided question exactly: the worst case
//! quantifies over *every* adversary behavior (all player-2 edges stay in
//! play), while the expectation fixes the given stochastic model. The
//! simulator estimates the same expectation by deterministic seeded
//! sampling; it exists for cross-checks only and never feeds decisions.

#![forbid(unsafe_code)]

mod bisim;
mod karp;
mod mp;
mod report;
mod sim;
mod sp;

pub use bisim::chains_bisimilar;
pub use karp::min_mean_cycle;
pub use mp::verify_mp;
pub use report::VerificationReport;
pub use sim::{simulate, SimStats};
pub use sp::verify_sp;
