//! Problem instances and end components.
//!
//! A [`BwcInstance`] bundles a game, the adversary's stochastic model, the
//! two thresholds and the objective. The worst-case threshold `mu` bounds
//! every single outcome; the expectation threshold `nu` bounds the expected
//! value against the model; both comparisons are strict. For mean-payoff the
//! play must stay strictly above the thresholds, for shortest path strictly
//! below (the instance must also satisfy the positive-weight convention).

use crate::graph::{validate, GameGraph, Owner, StateId};
use crate::machine::{validate_machine, MooreMachine};
use crate::rational::Rational;
use std::collections::BTreeSet;

/// The value function the instance is judged by.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Objective {
    /// liminf of average edge weight; thresholds are lower bounds.
    MeanPayoff,
    /// Total weight until the target set is first hit; thresholds are upper
    /// bounds and all weights must be ≥ 1.
    ShortestPath(BTreeSet<StateId>),
}

impl Objective {
    pub fn tag(&self) -> &'static str {
        match self {
            Objective::MeanPayoff => "mp",
            Objective::ShortestPath(_) => "sp",
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, thiserror::Error)]
pub enum InstanceError {
    #[error("game is structurally invalid: {0}")]
    InvalidGame(String),
    #[error("model is invalid: {0}")]
    InvalidModel(String),
    #[error("shortest-path instance needs a non-empty target set")]
    EmptyTarget,
    #[error("shortest-path weights must be ≥ 1 (found {0} on {1} -> {2})")]
    NonPositiveWeight(i64, String, String),
    #[error("shortest-path thresholds need 0 < nu < mu and integer mu (got mu={0}, nu={1})")]
    BadSpThresholds(Rational, Rational),
}

/// A full problem statement: game, adversary model, thresholds, objective.
#[derive(Clone, Debug)]
pub struct BwcInstance {
    pub game: GameGraph,
    pub model: MooreMachine,
    pub mu: Rational,
    pub nu: Rational,
    pub objective: Objective,
}

impl BwcInstance {
    /// Validates the parts and their fit. The mean-payoff convention `nu > mu`
    /// is not enforced: for `nu ≤ mu` the expectation requirement is implied
    /// by the worst-case one and the pipeline answers correctly anyway.
    pub fn new(
        game: GameGraph,
        model: MooreMachine,
        mu: Rational,
        nu: Rational,
        objective: Objective,
    ) -> Result<BwcInstance, InstanceError> {
        let game_violations = validate(&game);
        if let Some(v) = game_violations.first() {
            return Err(InstanceError::InvalidGame(v.to_string()));
        }
        let model_violations = validate_machine(&game, &model, Owner::P2);
        if let Some(v) = model_violations.first() {
            return Err(InstanceError::InvalidModel(v.to_string()));
        }
        if let Objective::ShortestPath(targets) = &objective {
            if targets.is_empty() {
                return Err(InstanceError::EmptyTarget);
            }
            for s in game.state_ids() {
                for &(t, w) in game.succ(s) {
                    if w < 1 {
                        return Err(InstanceError::NonPositiveWeight(
                            w,
                            game.state_name(s).to_string(),
                            game.state_name(t).to_string(),
                        ));
                    }
                }
            }
            if !mu.is_integer() || !mu.is_positive() || nu >= mu {
                return Err(InstanceError::BadSpThresholds(mu, nu));
            }
        }
        Ok(BwcInstance { game, model, mu, nu, objective })
    }

    pub fn is_mp(&self) -> bool {
        matches!(self.objective, Objective::MeanPayoff)
    }

    pub fn sp_targets(&self) -> Option<&BTreeSet<StateId>> {
        match &self.objective {
            Objective::ShortestPath(t) => Some(t),
            Objective::MeanPayoff => None,
        }
    }
}

/// Classification of an end component in the mean-payoff pipeline.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum EcClass {
    /// Worst-case winning from every state of the induced support subgame.
    Winning,
    /// Some state loses the worst-case in the induced support subgame.
    Losing,
    /// Not yet classified.
    Unclassified,
}

/// A state set strongly connected under positive-probability edges and closed
/// under stochastic supports, with optional classification and optimal gain.
#[derive(Clone, PartialEq, Debug)]
pub struct EndComponent {
    pub states: BTreeSet<StateId>,
    pub classification: EcClass,
    /// Optimal expected mean-payoff achievable inside the component
    /// (uniform across its states), when computed.
    pub gain: Option<Rational>,
}

impl EndComponent {
    pub fn unclassified(states: BTreeSet<StateId>) -> Self {
        EndComponent { states, classification: EcClass::Unclassified, gain: None }
    }

    pub fn contains(&self, s: StateId) -> bool {
        self.states.contains(&s)
    }

    /// Names of member states in declaration order, for reports and tests.
    pub fn names<'g>(&self, game: &'g GameGraph) -> Vec<&'g str> {
        self.states.iter().map(|&s| game.state_name(s)).collect()
    }
}
