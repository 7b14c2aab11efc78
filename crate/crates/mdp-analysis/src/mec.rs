//! Maximal end-component decomposition.

use std::collections::BTreeSet;

use core_model::{EndComponent, Mdp, Owner, StateId};

use crate::scc::sccs;

/// Disjoint maximal end components of an MDP, with a per-state membership
/// index.
#[derive(Debug, Clone)]
pub struct MecDecomposition {
    pub components: Vec<EndComponent>,
    /// State index → component index, `None` when the state is in no EC.
    pub membership: Vec<Option<usize>>,
}

impl MecDecomposition {
    pub fn component_of(&self, s: StateId) -> Option<&EndComponent> {
        self.membership[s.idx()].map(|i| &self.components[i])
    }
}

/// Standard iterative refinement: starting from the whole state space, keep
/// splitting candidate sets into strongly connected parts (over `EΔ`) after
/// pruning stochastic states whose support leaves the candidate and player-1
/// states with no internal edge.  A candidate that survives pruning and is a
/// single strongly connected part (singletons need a self-edge) is a maximal
/// end component.
///
/// Components are reported ordered by their smallest state index; every
/// state belongs to at most one.
pub fn mec_decompose(mdp: &Mdp) -> MecDecomposition {
    let g = mdp.graph();
    let n = g.n_states();
    let support_row = |s: StateId| -> Vec<StateId> {
        match g.owner(s) {
            Owner::P1 => g.succ(s).iter().map(|&(t, _)| t).collect(),
            Owner::P2 => mdp.support_succ(s),
        }
    };

    let mut found: Vec<BTreeSet<StateId>> = Vec::new();
    let mut stack: Vec<BTreeSet<StateId>> = vec![g.state_ids().collect()];
    while let Some(mut c) = stack.pop() {
        // Prune closure violations to a fixed point.
        loop {
            let bad: Vec<StateId> = c
                .iter()
                .copied()
                .filter(|&s| match g.owner(s) {
                    Owner::P1 => !support_row(s).iter().any(|t| c.contains(t)),
                    Owner::P2 => support_row(s).iter().any(|t| !c.contains(t)),
                })
                .collect();
            if bad.is_empty() {
                break;
            }
            for s in bad {
                c.remove(&s);
            }
        }
        if c.is_empty() {
            continue;
        }
        // Strongly connected parts of the pruned candidate.
        let local: Vec<StateId> = c.iter().copied().collect();
        let pos = |s: StateId| local.binary_search(&s).expect("member of the candidate");
        let mut edges = Vec::new();
        for &s in &local {
            for t in support_row(s) {
                if c.contains(&t) {
                    edges.push((pos(s), pos(t)));
                }
            }
        }
        let comps = sccs(local.len(), edges);
        if comps.len() == 1 && comps[0].len() == c.len() {
            let single = c.len() == 1;
            let s0 = local[0];
            if !single || support_row(s0).contains(&s0) {
                found.push(c);
                continue;
            }
            // A closed singleton without a self-edge recurs nowhere: drop it.
            continue;
        }
        for comp in comps {
            stack.push(comp.into_iter().map(|i| local[i]).collect());
        }
    }

    found.sort_by_key(|c| *c.iter().next().expect("components are non-empty"));
    let mut membership = vec![None; n];
    for (i, c) in found.iter().enumerate() {
        for &s in c {
            debug_assert!(membership[s.idx()].is_none(), "components overlap");
            membership[s.idx()] = Some(i);
        }
    }
    let components = found.into_iter().map(EndComponent::unclassified).collect();
    MecDecomposition { components, membership }
}
