//! MDPs and Markov chains as games with one or both sides fixed.
//!
//! An [`Mdp`] is a game whose player-2 states carry a fixed distribution over
//! successors; the derived support edge set `EΔ` keeps player-1 edges and the
//! player-2 edges of strictly positive probability. A [`MarkovChain`] fixes a
//! distribution at every state. Both reuse the underlying [`GameGraph`] for
//! names, weights and iteration order.

use crate::graph::{GameGraph, Owner, StateId};
use crate::machine::Distribution;
use crate::rational::Rational;
use std::collections::BTreeMap;

#[derive(Clone, PartialEq, Eq, Debug, thiserror::Error)]
pub enum FixError {
    #[error("state `{0}` needs a distribution but has none")]
    MissingDistribution(String),
    #[error("distribution at `{0}` sums to {1}, expected 1")]
    BadSum(String, Rational),
    #[error("distribution at `{0}` mentions non-successor `{1}`")]
    SupportOutsideSuccessors(String, String),
    #[error("model is not memoryless ({0} memory elements)")]
    NotMemoryless(usize),
}

/// A game with all player-2 states resolved to fixed distributions.
#[derive(Clone, Debug)]
pub struct Mdp {
    graph: GameGraph,
    delta: BTreeMap<StateId, Distribution>,
}

impl Mdp {
    /// Wraps a graph and per-stochastic-state distributions; checks exact
    /// sums and support inclusion for every player-2 state.
    pub fn new(graph: GameGraph, delta: BTreeMap<StateId, Distribution>) -> Result<Mdp, FixError> {
        for s in graph.state_ids() {
            if graph.owner(s) != Owner::P2 {
                continue;
            }
            let d = delta
                .get(&s)
                .ok_or_else(|| FixError::MissingDistribution(graph.state_name(s).to_string()))?;
            let sum = d.sum();
            if sum != Rational::one() {
                return Err(FixError::BadSum(graph.state_name(s).to_string(), sum));
            }
            for (t, _) in d.entries() {
                if graph.edge_weight(s, *t).is_none() {
                    return Err(FixError::SupportOutsideSuccessors(
                        graph.state_name(s).to_string(),
                        graph.state_name(*t).to_string(),
                    ));
                }
            }
        }
        Ok(Mdp { graph, delta })
    }

    pub fn graph(&self) -> &GameGraph {
        &self.graph
    }

    pub fn delta(&self, s: StateId) -> Option<&Distribution> {
        self.delta.get(&s)
    }

    pub fn stochastic_states(&self) -> impl Iterator<Item = StateId> + '_ {
        self.graph.state_ids().filter(|&s| self.graph.owner(s) == Owner::P2)
    }

    /// True iff the edge (s, t) is in `EΔ`: a player-1 edge, or a player-2
    /// edge of strictly positive probability.
    pub fn in_support(&self, s: StateId, t: StateId) -> bool {
        if self.graph.edge_weight(s, t).is_none() {
            return false;
        }
        match self.graph.owner(s) {
            Owner::P1 => true,
            Owner::P2 => self.delta[&s].prob(t).is_positive(),
        }
    }

    /// Successors of `s` along `EΔ`, in declaration order.
    pub fn support_succ(&self, s: StateId) -> Vec<StateId> {
        self.graph
            .succ(s)
            .iter()
            .map(|&(t, _)| t)
            .filter(|&t| self.in_support(s, t))
            .collect()
    }

    /// The support game `GΔ`: same states, edges restricted to `EΔ`.
    /// Player-2 states keep only their positive-probability edges, so a
    /// worst-case analysis of this game quantifies over model-consistent
    /// adversary behavior.
    pub fn support_game(&self) -> GameGraph {
        use crate::graph::GameBuilder;
        let g = &self.graph;
        let mut b = GameBuilder::new(g.name());
        for s in g.state_ids() {
            b.state(g.state_name(s), g.owner(s)).expect("unique names");
        }
        for s in g.state_ids() {
            for &(t, w) in g.succ(s) {
                if self.in_support(s, t) {
                    b.edge_ids(s, t, w);
                }
            }
            if g.is_target(s) {
                b.target_id(s);
            }
        }
        b.init_id(g.initial());
        b.finish().expect("initial present")
    }

    /// Restricts the MDP to `keep` (distributions are re-indexed onto the
    /// subgraph). Caller must ensure stochastic supports stay inside `keep`.
    pub fn restrict(&self, keep: &std::collections::BTreeSet<StateId>, initial: StateId) -> Mdp {
        let r = self.graph.restrict(keep, initial);
        let mut delta = BTreeMap::new();
        for (&full, &sub) in &r.to_sub {
            if let Some(d) = self.delta.get(&full) {
                let entries = d
                    .entries()
                    .iter()
                    .map(|(t, p)| {
                        let ts = *r
                            .to_sub
                            .get(t)
                            .expect("stochastic support leaves the restriction set");
                        (ts, p.clone())
                    })
                    .collect();
                delta.insert(sub, Distribution(entries));
            }
        }
        Mdp::new(r.graph, delta).expect("restriction preserves distribution validity")
    }
}

/// A fully resolved stochastic process over a game graph.
#[derive(Clone, Debug)]
pub struct MarkovChain {
    graph: GameGraph,
    delta: BTreeMap<StateId, Distribution>,
}

impl MarkovChain {
    /// Wraps a graph and a distribution for every state.
    pub fn new(
        graph: GameGraph,
        delta: BTreeMap<StateId, Distribution>,
    ) -> Result<MarkovChain, FixError> {
        for s in graph.state_ids() {
            let d = delta
                .get(&s)
                .ok_or_else(|| FixError::MissingDistribution(graph.state_name(s).to_string()))?;
            let sum = d.sum();
            if sum != Rational::one() {
                return Err(FixError::BadSum(graph.state_name(s).to_string(), sum));
            }
            for (t, _) in d.entries() {
                if graph.edge_weight(s, *t).is_none() {
                    return Err(FixError::SupportOutsideSuccessors(
                        graph.state_name(s).to_string(),
                        graph.state_name(*t).to_string(),
                    ));
                }
            }
        }
        Ok(MarkovChain { graph, delta })
    }

    pub fn graph(&self) -> &GameGraph {
        &self.graph
    }

    pub fn delta(&self, s: StateId) -> &Distribution {
        &self.delta[&s]
    }

    pub fn initial(&self) -> StateId {
        self.graph.initial()
    }

    /// Expected one-step weight leaving `s`.
    pub fn step_reward(&self, s: StateId) -> Rational {
        self.delta(s)
            .entries()
            .iter()
            .map(|(t, p)| {
                let w = self.graph.edge_weight(s, *t).expect("support within successors");
                p * &Rational::from_int(w)
            })
            .sum()
    }
}
