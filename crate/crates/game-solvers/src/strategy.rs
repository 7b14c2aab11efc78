//! Memoryless worst-case strategies from energy progress measures.

use std::collections::{BTreeMap, BTreeSet};

use core_model::{GameGraph, Owner, PureStrategy, Rational, StateId};
use thiserror::Error;

use crate::energy::strict_measure;
use crate::value::mp_optimal_value;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StrategyError {
    #[error("initial state {0} cannot guarantee a mean payoff above the threshold")]
    InitialOutsideWinningRegion(String),
}

/// Full worst-case solution relative to a strict mean-payoff threshold.
#[derive(Debug, Clone)]
pub struct WorstCaseResult {
    /// States from which player 1 guarantees mean payoff `> threshold`.
    pub winning_states: BTreeSet<StateId>,
    /// Exact per-state game values (for every state, winning or not).
    pub optimal_value: BTreeMap<StateId, Rational>,
    /// Memoryless witness strategy on the winning player-1 states.
    pub strategy: PureStrategy,
}

/// Memoryless strategy guaranteeing mean payoff `> threshold` from every
/// winning state.
///
/// At each winning player-1 state the first declared successor whose energy
/// demand does not exceed the state's credit is chosen; following such edges
/// keeps the rescaled running sum bounded below, which certifies the strict
/// threshold on every consistent outcome.  Chosen successors are always
/// winning themselves.  Errors when the initial state is losing.
pub fn extract_wc_strategy(game: &GameGraph, threshold: &Rational) -> Result<PureStrategy, StrategyError> {
    let (pm, weight) = strict_measure(game, threshold);
    if pm.credit(game.initial()).is_none() {
        return Err(StrategyError::InitialOutsideWinningRegion(
            game.state_name(game.initial()).to_owned(),
        ));
    }
    let mut strategy = PureStrategy::new();
    for s in game.state_ids() {
        if game.owner(s) != Owner::P1 {
            continue;
        }
        let Some(credit) = pm.credit(s) else { continue };
        let pick = game
            .succ(s)
            .iter()
            .find(|(t, w)| pm.demand(*t, weight(*w)).is_some_and(|d| d <= credit))
            .map(|(t, _)| *t)
            .expect("a winning state has a successor matching its fixed-point credit");
        strategy.choice.insert(s, pick);
    }
    Ok(strategy)
}

/// Region, values and witness strategy for `mean payoff > threshold` in one
/// call.  Values are computed per state and are exact; intended for small
/// games and reporting, the pipeline itself uses the cheaper single-purpose
/// entry points.
pub fn solve_worst_case(game: &GameGraph, threshold: &Rational) -> Result<WorstCaseResult, StrategyError> {
    let (pm, _) = strict_measure(game, threshold);
    let winning_states = pm.winning(game);
    let strategy = extract_wc_strategy(game, threshold)?;
    let optimal_value = game.state_ids().map(|s| (s, mp_optimal_value(game, s))).collect();
    Ok(WorstCaseResult { winning_states, optimal_value, strategy })
}
