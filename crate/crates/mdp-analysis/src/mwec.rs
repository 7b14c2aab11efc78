//! Maximal winning end components.
//!
//! A winning end component is one inside which player 1 can keep the
//! mean payoff strictly positive against adversarial resolution of the
//! stochastic states (restricted to their support).  Losing parts of an end
//! component are carved out and the remainder is decomposed again, so the
//! result can contain strict sub-components of maximal end components.

use std::collections::BTreeSet;

use core_model::{EcClass, EndComponent, GameGraph, Mdp, Owner, StateId};
use game_solvers::mp_strictly_positive_region;

use crate::mec::mec_decompose;

/// Maximal winning end components of `mdp`, where `game` is the two-player
/// view of the same graph (adversary restricted to the stochastic support).
///
/// Requires every stochastic edge to carry strictly positive probability, so
/// the MDP's support and the game's edges coincide; the caller drops
/// zero-probability edges beforehand.  Components are reported by smallest
/// state index; they are pairwise disjoint and classified `Winning`.
pub fn mwec(mdp: &Mdp, game: &GameGraph) -> Vec<EndComponent> {
    assert_eq!(
        game.n_states(),
        mdp.graph().n_states(),
        "game and MDP must share the state space"
    );
    for s in mdp.stochastic_states() {
        let d = mdp.delta(s).expect("stochastic state has a distribution");
        assert!(
            d.entries().iter().all(|(_, p)| p.is_positive())
                && d.entries().len() == mdp.graph().succ(s).len(),
            "zero-probability edges must be dropped before the winning-component analysis"
        );
    }

    let to_orig: Vec<StateId> = mdp.graph().state_ids().collect();
    let mut found: Vec<BTreeSet<StateId>> = Vec::new();
    go(mdp, game, &to_orig, &mut found);
    found.sort_by_key(|c| *c.iter().next().expect("non-empty component"));
    for (i, a) in found.iter().enumerate() {
        for b in found.iter().skip(i + 1) {
            debug_assert!(a.is_disjoint(b), "winning components overlap");
        }
    }
    found
        .into_iter()
        .map(|states| EndComponent {
            states,
            classification: EcClass::Winning,
            gain: None,
        })
        .collect()
}

fn go(mdp: &Mdp, game: &GameGraph, to_orig: &[StateId], out: &mut Vec<BTreeSet<StateId>>) {
    for ec in mec_decompose(mdp).components {
        let u = ec.states;
        let first = *u.iter().next().expect("non-empty component");
        let sub = game.restrict(&u, first);
        let win = mp_strictly_positive_region(&sub.graph);
        if win.len() == sub.graph.n_states() {
            out.push(u.iter().map(|s| to_orig[s.idx()]).collect());
            continue;
        }
        // Carve out the losing part and recurse on what remains, after
        // restoring closure (removals can cascade).
        let mut keep: BTreeSet<StateId> = win.iter().map(|w| sub.to_full[w.idx()]).collect();
        loop {
            let bad: Vec<StateId> = keep
                .iter()
                .copied()
                .filter(|&s| match mdp.graph().owner(s) {
                    Owner::P1 => {
                        !mdp.graph().succ(s).iter().any(|&(t, _)| keep.contains(&t))
                    }
                    Owner::P2 => mdp.support_succ(s).iter().any(|t| !keep.contains(t)),
                })
                .collect();
            if bad.is_empty() {
                break;
            }
            for s in bad {
                keep.remove(&s);
            }
        }
        if keep.is_empty() {
            continue;
        }
        let first = *keep.iter().next().expect("non-empty remainder");
        let sub_mdp = mdp.restrict(&keep, first);
        let sub_game = game.restrict(&keep, first);
        let to_next: Vec<StateId> =
            sub_game.to_full.iter().map(|s| to_orig[s.idx()]).collect();
        go(&sub_mdp, &sub_game.graph, &to_next, out);
    }
}
