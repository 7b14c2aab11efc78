//! Exact analysis of Markov decision processes and Markov chains.
//!
//! The MDPs here arise as products of a game with a stochastic adversary
//! model: player-1 states keep their choices, player-2 states carry a fixed
//! distribution.  This crate provides maximal end-component decomposition,
//! the winning-component computation that combines end components with
//! worst-case solving, exact optimal expected mean payoffs (policy iteration
//! with rational linear solves), exact minimal expected costs to a target,
//! and reachability/stationary analysis of finite Markov chains.
//!
//! All numbers are exact rationals; `∞` (a target unreachable almost
//! surely) is an explicit extended value, never a sentinel.

#![forbid(unsafe_code)]

mod chain;
mod gain;
mod linalg;
mod mec;
mod mwec;
mod scc;
mod tsum;

pub use chain::{chain_gains, mc_expected_mp, reach_probability};
pub use linalg::solve as solve_linear;
pub use gain::{max_expected_mp, GainSolution};
pub use mec::{mec_decompose, MecDecomposition};
pub use mwec::mwec;
pub use tsum::{almost_sure_reach_region, min_expected_truncated_sum, TsSolution};
