//! Verification verdicts returned to callers and rendered by the CLI.

use core_model::ExtRational;

/// Exact verification outcome of one finite-memory strategy against one
/// instance. `worst_case` ranges over every adversary; `expectation` is
/// against the given stochastic model only.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VerificationReport {
    /// `"mp"` or `"sp"`.
    pub objective: &'static str,
    /// Value of the worst consistent outcome: minimum mean cycle for
    /// mean-payoff, longest accumulated cost for shortest path (`∞` when
    /// some consistent outcome never reaches the target).
    pub worst_case: ExtRational,
    /// Expected value against the stochastic model (`∞` only for a
    /// shortest-path strategy whose chain misses the target with positive
    /// probability).
    pub expectation: ExtRational,
    /// States of the worst-case product (game × strategy memory).
    pub product_states: usize,
    /// States of the chain (game × strategy × model memories).
    pub chain_states: usize,
    /// Worst case strictly beats `mu` (above for MP, below for SP with the
    /// target surely reached).
    pub pass_worst_case: bool,
    /// Expectation strictly beats `nu`.
    pub pass_expectation: bool,
    /// When a shortest-path strategy can be trapped forever: one offending
    /// product cycle, by product state name.
    pub cycle: Option<Vec<String>>,
}

impl VerificationReport {
    /// Both requirements hold.
    pub fn pass(&self) -> bool {
        self.pass_worst_case && self.pass_expectation
    }
}
