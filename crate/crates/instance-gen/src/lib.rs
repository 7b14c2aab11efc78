//! Ready-made game instances: a small library of built-in examples, two
//! parametric families with known optimal strategies, a reduction from the
//! K-th largest subset problem, and a seeded random generator for property
//! tests.
//!
//! Every generator returns a fully validated [`core_model::BwcInstance`];
//! games never carry two edges over one ordered state pair, so figures drawn
//! with parallel edges are encoded with auxiliary states (a *twin* that copies
//! the destination for mean-payoff games, or a pass-through *dummy* splitting
//! a long edge into two halves for shortest-path games, where every weight
//! must stay at least 1).

#![forbid(unsafe_code)]

mod builtins;
mod kth;
mod random;

pub use builtins::{
    builtin, fig1, fig1_reference_strategy, fig2, fig3, fig5, gen_fig6, gen_sp_family,
    sp_family_expected_cost,
};
pub use kth::{kth_constants, reduce_kth_subset, subset_path_total, KthConstants, KthSubsetInstance};
pub use random::{gen_random, GenObjective};

/// Why a generator refused to produce an instance.
#[derive(Clone, PartialEq, Eq, Debug, thiserror::Error)]
pub enum GenError {
    #[error("unknown builtin `{0}`")]
    UnknownBuiltin(String),
    #[error("{0}")]
    BadParameter(String),
}
