//! Shortest-path worst-case unfolding.
//!
//! For a shortest-path instance with bound `μ`, player 1 must reach a target
//! with accumulated cost `< μ` on every outcome.  The game is unfolded over
//! the running sum: nodes are pairs `(state, sum)` with `sum < μ`, any move
//! pushing the sum to `μ` or beyond leads to a virtual overflow sink that is
//! absorbing and never a target.  Player 1's attractor to the unfolded
//! targets is exactly the region where the worst case is met; restricting to
//! it yields a game `Gμ` whose non-target part is acyclic (weights are
//! strictly positive, so the sum strictly increases).
//!
//! Unfolded target nodes are made absorbing with a zero-weight self-loop:
//! the cost of a play is fixed at its first target visit, so behaviour after
//! it is irrelevant and a canonical loop keeps the game non-blocking.
//!
//! Only pair nodes reachable from `(initial, 0)` are materialized; the
//! overflow sink is tracked per node instead of being built.

use std::collections::BTreeMap;

use core_model::{GameBuilder, GameGraph, Owner, StateId};
use thiserror::Error;

/// Result of the unfolding: the restricted game plus the pair each unfolded
/// state came from.
#[derive(Debug, Clone)]
pub struct SpUnfold {
    /// The game `Gμ`: unfolded states in discovery order, targets absorbing.
    pub game: GameGraph,
    /// For each state of `game`, the original state and the accumulated sum.
    pub back: Vec<(StateId, u64)>,
}

impl SpUnfold {
    /// Original state an unfolded state projects to.
    pub fn orig(&self, s: StateId) -> StateId {
        self.back[s.idx()].0
    }

    /// Accumulated sum at an unfolded state.
    pub fn sum(&self, s: StateId) -> u64 {
        self.back[s.idx()].1
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("no strategy keeps the cost below {mu} on every outcome from the initial state")]
pub struct SpEarlyNo {
    pub mu: u64,
}

/// Unfolds `game` over the running sum up to `mu` and restricts to the
/// player-1 attractor of the in-budget target copies.
///
/// Errors with [`SpEarlyNo`] when the initial state is outside the
/// attractor, i.e. the adversary can force cost `≥ mu` (or avoid targets
/// altogether).  All edge weights must be strictly positive.
pub fn sp_worst_case_unfold(game: &GameGraph, mu: u64) -> Result<SpUnfold, SpEarlyNo> {
    assert!(!game.targets().is_empty(), "shortest-path game without targets");
    if mu == 0 {
        return Err(SpEarlyNo { mu });
    }

    // Forward exploration from (initial, 0).
    let mut pairs: Vec<(StateId, u64)> = Vec::new();
    let mut index: BTreeMap<(StateId, u64), usize> = BTreeMap::new();
    let mut edges: Vec<Vec<(usize, i64)>> = Vec::new();
    let mut overflow: Vec<bool> = Vec::new();
    let mut is_target: Vec<bool> = Vec::new();

    fn intern(
        game: &GameGraph,
        pairs: &mut Vec<(StateId, u64)>,
        index: &mut BTreeMap<(StateId, u64), usize>,
        edges: &mut Vec<Vec<(usize, i64)>>,
        overflow: &mut Vec<bool>,
        is_target: &mut Vec<bool>,
        p: (StateId, u64),
    ) -> (usize, bool) {
        if let Some(&u) = index.get(&p) {
            return (u, false);
        }
        let u = pairs.len();
        index.insert(p, u);
        pairs.push(p);
        edges.push(Vec::new());
        overflow.push(false);
        is_target.push(game.is_target(p.0));
        (u, true)
    }

    let (root, _) = intern(
        game,
        &mut pairs,
        &mut index,
        &mut edges,
        &mut overflow,
        &mut is_target,
        (game.initial(), 0),
    );
    let mut frontier = vec![root];
    while let Some(u) = frontier.pop() {
        if is_target[u] {
            continue;
        }
        let (s, c) = pairs[u];
        for &(t, w) in game.succ(s) {
            assert!(w >= 1, "shortest-path unfolding requires strictly positive weights");
            let c2 = c as u128 + w as u128;
            if c2 >= mu as u128 {
                overflow[u] = true;
                continue;
            }
            let (v, fresh) = intern(
                game,
                &mut pairs,
                &mut index,
                &mut edges,
                &mut overflow,
                &mut is_target,
                (t, c2 as u64),
            );
            edges[u].push((v, w));
            if fresh {
                frontier.push(v);
            }
        }
    }

    // Player-1 attractor to the target copies, with the overflow sink kept
    // out: a player-2 node with an overflow move can never be attracted.
    let n = pairs.len();
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (u, out) in edges.iter().enumerate() {
        for &(v, _) in out {
            preds[v].push(u);
        }
    }
    let mut inside = vec![false; n];
    let mut remaining: Vec<usize> =
        (0..n).map(|u| edges[u].len() + usize::from(overflow[u])).collect();
    let mut queue: Vec<usize> = (0..n).filter(|&u| is_target[u]).collect();
    for &u in &queue {
        inside[u] = true;
    }
    while let Some(v) = queue.pop() {
        for &u in &preds[v] {
            if inside[u] || is_target[u] {
                continue;
            }
            let joins = if game.owner(pairs[u].0) == Owner::P1 {
                true
            } else {
                remaining[u] -= 1;
                remaining[u] == 0
            };
            if joins {
                inside[u] = true;
                queue.push(u);
            }
        }
    }

    if !inside[root] {
        return Err(SpEarlyNo { mu });
    }

    // Build Gμ on the attractor, keeping discovery order.
    let mut b = GameBuilder::new(&format!("{}.unfold{}", game.name(), mu));
    let mut back = Vec::new();
    let mut ids: Vec<Option<StateId>> = vec![None; n];
    for u in 0..n {
        if !inside[u] {
            continue;
        }
        let (s, c) = pairs[u];
        let name = format!("{}.c{}", game.state_name(s), c);
        let id = b.state(&name, game.owner(s)).expect("pair names are unique");
        ids[u] = Some(id);
        back.push((s, c));
        if is_target[u] {
            b.target_id(id);
        }
    }
    for u in 0..n {
        let Some(src) = ids[u] else { continue };
        if is_target[u] {
            b.edge_ids(src, src, 0);
            continue;
        }
        for &(v, w) in &edges[u] {
            if let Some(dst) = ids[v] {
                b.edge_ids(src, dst, w);
            }
        }
    }
    b.init_id(ids[root].expect("root is inside the attractor"));
    let game_mu = b.finish().expect("attractor restriction leaves no deadlocks");
    Ok(SpUnfold { game: game_mu, back })
}
