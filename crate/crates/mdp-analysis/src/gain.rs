//! Maximal expected mean payoff of an MDP, exactly.

use std::collections::BTreeMap;

use core_model::{MarkovChain, Mdp, Owner, PureStrategy, Rational, StateId};

use crate::chain::{chain_structure, gains_with_structure};
use crate::mec::{mec_decompose, MecDecomposition};

/// Exact optimal expected mean payoffs with a memoryless witness policy.
#[derive(Debug, Clone)]
pub struct GainSolution {
    /// Optimal expected mean payoff per state.
    pub gain: Vec<Rational>,
    /// Witness policy attaining `gain` everywhere.
    pub policy: PureStrategy,
    /// Maximal end components of the MDP.
    pub mecs: MecDecomposition,
    /// Per component: whether the witness chain restricted to it has at most
    /// one recurrent class (enforced by post-processing).
    pub unichain: Vec<bool>,
}

fn induced_chain(mdp: &Mdp, policy: &PureStrategy) -> MarkovChain {
    let g = mdp.graph();
    let mut delta = BTreeMap::new();
    for s in g.state_ids() {
        let d = match g.owner(s) {
            Owner::P1 => core_model::Distribution::dirac(
                policy.get(s).expect("policy covers every player-1 state"),
            ),
            Owner::P2 => mdp.delta(s).expect("stochastic state has a distribution").clone(),
        };
        delta.insert(s, d);
    }
    MarkovChain::new(g.clone(), delta).expect("induced chain is total")
}

/// Howard policy iteration with exact gain/bias evaluation.
///
/// Improvement is two-phase: first switch to a successor with strictly
/// larger gain (first maximizer in declaration order); once gains are
/// stable, discriminate equal-gain successors by `weight + bias`.  The
/// current choice is kept on ties, which guarantees termination on the
/// finite policy space.  Afterwards, inside every end component that the
/// witness chain settles in, all same-component recurrent classes are merged
/// into the first one by re-routing player-1 members along an internal
/// attractor, making the chain unichain per component without changing any
/// gain.
pub fn max_expected_mp(mdp: &Mdp) -> GainSolution {
    let g = mdp.graph();
    let mut policy = PureStrategy::new();
    for s in g.state_ids() {
        if g.owner(s) == Owner::P1 {
            policy.choice.insert(s, g.succ(s)[0].0);
        }
    }

    let (gain, _bias) = loop {
        let mc = induced_chain(mdp, &policy);
        let st = chain_structure(&mc);
        let (gain, bias) = gains_with_structure(&mc, &st);

        let mut switched = false;
        for s in g.state_ids().filter(|&s| g.owner(s) == Owner::P1) {
            let best = g
                .succ(s)
                .iter()
                .map(|&(t, _)| t)
                .max_by(|a, b| gain[a.idx()].cmp(&gain[b.idx()]))
                .expect("non-blocking state");
            // max_by returns the last maximum; rescan for the first.
            let best = g
                .succ(s)
                .iter()
                .map(|&(t, _)| t)
                .find(|t| gain[t.idx()] == gain[best.idx()])
                .expect("maximum exists");
            if gain[best.idx()] > gain[s.idx()] {
                policy.choice.insert(s, best);
                switched = true;
            }
        }
        if switched {
            continue;
        }

        for s in g.state_ids().filter(|&s| g.owner(s) == Owner::P1) {
            let cur = policy.get(s).expect("covered");
            let cur_w = g.edge_weight(s, cur).expect("policy edge exists");
            let cur_val = &Rational::from_int(cur_w) + &bias[cur.idx()];
            let mut best: Option<(StateId, Rational)> = None;
            for &(t, w) in g.succ(s) {
                if gain[t.idx()] != gain[s.idx()] {
                    continue;
                }
                let val = &Rational::from_int(w) + &bias[t.idx()];
                if best.as_ref().is_none_or(|(_, bv)| val > *bv) {
                    best = Some((t, val));
                }
            }
            if let Some((t, val)) = best {
                if val > cur_val {
                    policy.choice.insert(s, t);
                    switched = true;
                }
            }
        }
        if !switched {
            break (gain, bias);
        }
    };

    // Unichain post-processing: inside each end component the witness chain
    // settles in, merge all recurrent classes into the first one.  Every
    // player-1 member of the component whose gain equals the kept class's is
    // re-routed to its first successor strictly closer (in attractor rounds)
    // to that class; such states keep their gain, states with a larger gain
    // (they exit the component) are left untouched, and the strict rank
    // decrease rules out any new recurrent class.
    let mecs = mec_decompose(mdp);
    let unichain = vec![true; mecs.components.len()];
    let mc = induced_chain(mdp, &policy);
    let st = chain_structure(&mc);
    for comp in &mecs.components {
        let inside: Vec<&Vec<usize>> = st
            .bsccs
            .iter()
            .filter(|b| comp.states.contains(&StateId(b[0] as u32)))
            .collect();
        if inside.len() <= 1 {
            continue;
        }
        let keep = inside[0];
        let target_gain = gain[keep[0]].clone();
        let mut rank: BTreeMap<StateId, usize> =
            keep.iter().map(|&i| (StateId(i as u32), 0)).collect();
        let mut round = 0;
        loop {
            round += 1;
            let added: Vec<StateId> = comp
                .states
                .iter()
                .copied()
                .filter(|s| !rank.contains_key(s))
                .filter(|&s| match g.owner(s) {
                    Owner::P1 => g.succ(s).iter().any(|(t, _)| rank.contains_key(t)),
                    Owner::P2 => mdp.support_succ(s).iter().any(|t| rank.contains_key(t)),
                })
                .collect();
            if added.is_empty() {
                break;
            }
            for s in added {
                rank.insert(s, round);
            }
        }
        debug_assert_eq!(rank.len(), comp.states.len(), "components are internally connected");
        for &s in &comp.states {
            if g.owner(s) != Owner::P1 || rank[&s] == 0 || gain[s.idx()] != target_gain {
                continue;
            }
            let to = g
                .succ(s)
                .iter()
                .map(|&(t, _)| t)
                .find(|t| rank.get(t).is_some_and(|&r| r < rank[&s]))
                .expect("every ranked state has an earlier-ranked successor");
            policy.choice.insert(s, to);
        }
    }

    #[cfg(debug_assertions)]
    {
        let mc2 = induced_chain(mdp, &policy);
        let st2 = chain_structure(&mc2);
        for comp in &mecs.components {
            let classes = st2
                .bsccs
                .iter()
                .filter(|b| comp.states.contains(&StateId(b[0] as u32)))
                .count();
            debug_assert!(classes <= 1, "one recurrent class per component after merging");
        }
        debug_assert_eq!(gains_with_structure(&mc2, &st2).0, gain, "merging preserves gains");
    }

    GainSolution { gain, policy, mecs, unichain }
}
