//! Mean-payoff game values by exhaustive memoryless strategy enumeration.
//!
//! Both players admit optimal memoryless strategies for mean payoff, so the
//! value of every state is the max over player-1 choice functions of the min
//! over player-2 choice functions of the lasso mean reached under the pair.

use core_model::{GameGraph, Owner, Rational, StateId};

/// Mean weight of the cycle entered when every state follows `choice`.
fn lasso_mean(game: &GameGraph, choice: &[StateId], from: StateId) -> Rational {
    let n = game.n_states();
    let mut seen_at = vec![usize::MAX; n];
    let mut walk: Vec<(StateId, i64)> = Vec::new();
    let mut at = from;
    loop {
        if seen_at[at.idx()] != usize::MAX {
            let k = seen_at[at.idx()];
            let total: i128 = walk[k..].iter().map(|&(_, w)| w as i128).sum();
            let len = walk.len() - k;
            let t = i64::try_from(total).expect("cycle weight exceeds i64");
            return Rational::new(t, len as i64);
        }
        seen_at[at.idx()] = walk.len();
        let next = choice[at.idx()];
        let w = game.edge_weight(at, next).expect("choice must follow an edge");
        walk.push((at, w));
        at = next;
    }
}

/// All choice functions over `states`, as full-length vectors indexed by
/// state (entries outside `states` keep the seed value).
fn assignments(game: &GameGraph, states: &[StateId], seed: &[StateId]) -> Vec<Vec<StateId>> {
    let mut out = vec![seed.to_vec()];
    for &s in states {
        let succs: Vec<StateId> = game.succ(s).iter().map(|&(t, _)| t).collect();
        let mut next = Vec::with_capacity(out.len() * succs.len());
        for base in &out {
            for &t in &succs {
                let mut v = base.clone();
                v[s.idx()] = t;
                next.push(v);
            }
        }
        out = next;
    }
    out
}

/// Value of the mean-payoff game at every state (indexed by state number):
/// player 1 maximizes, player 2 minimizes, both memoryless.
pub fn mp_game_values(game: &GameGraph) -> Vec<Rational> {
    let n = game.n_states();
    let p1: Vec<StateId> = game.state_ids().filter(|&s| game.owner(s) == Owner::P1).collect();
    let p2: Vec<StateId> = game.state_ids().filter(|&s| game.owner(s) == Owner::P2).collect();
    let seed: Vec<StateId> = game
        .state_ids()
        .map(|s| game.succ(s).first().expect("non-blocking game").0)
        .collect();
    let mut best: Vec<Option<Rational>> = vec![None; n];
    for c1 in assignments(game, &p1, &seed) {
        let mut worst: Vec<Option<Rational>> = vec![None; n];
        for c2 in assignments(game, &p2, &c1) {
            for s in game.state_ids() {
                let v = lasso_mean(game, &c2, s);
                let slot = &mut worst[s.idx()];
                if slot.as_ref().map_or(true, |cur| v < *cur) {
                    *slot = Some(v);
                }
            }
        }
        for i in 0..n {
            let v = worst[i].take().expect("at least one adversary assignment");
            if best[i].as_ref().map_or(true, |cur| v > *cur) {
                best[i] = Some(v);
            }
        }
    }
    best.into_iter().map(|v| v.expect("at least one assignment")).collect()
}

/// Smallest lasso mean from `from` when every state, regardless of owner,
/// minimizes. With player-1 states already resolved to a single successor
/// this is the adversary's best response value.
pub fn mp_response_value(game: &GameGraph, from: StateId) -> Rational {
    let all: Vec<StateId> = game.state_ids().collect();
    let seed: Vec<StateId> = game
        .state_ids()
        .map(|s| game.succ(s).first().expect("non-blocking game").0)
        .collect();
    assignments(game, &all, &seed)
        .into_iter()
        .map(|c| lasso_mean(game, &c, from))
        .min()
        .expect("at least one assignment")
}
