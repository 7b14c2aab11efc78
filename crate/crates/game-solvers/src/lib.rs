//! Worst-case analysis of weighted two-player games.
//!
//! Player 1 maximizes and player 2 minimizes the mean payoff (or, for
//! shortest-path objectives, the roles flip and the quantity is the sum of
//! weights until a target is reached).  Everything here treats player 2 as
//! fully adversarial; stochastic semantics enter only in later pipeline
//! stages.
//!
//! The mean-payoff solvers reduce threshold questions to energy games and
//! solve those with a small-progress-measure lifting loop, so all answers
//! are exact.

#![forbid(unsafe_code)]

mod attractor;
mod energy;
mod strategy;
mod unfold;
mod value;

pub use attractor::attractor;
pub use energy::{mp_at_least_region, mp_strictly_above_region, mp_strictly_positive_region, ProgressMeasure};
pub use strategy::{extract_wc_strategy, solve_worst_case, StrategyError, WorstCaseResult};
pub use unfold::{sp_worst_case_unfold, SpEarlyNo, SpUnfold};
pub use value::mp_optimal_value;
