//! Classical attractor computation.

use std::collections::BTreeSet;

use core_model::{GameGraph, Owner, StateId};

/// States from which `player` can force a visit to `targets` regardless of
/// the opponent's choices.
///
/// Computed as a backward fixed point: a state owned by `player` joins the
/// attractor as soon as one successor is inside, an opponent state once all
/// of its successors are.  The fixed point is reached after at most `|S|`
/// rounds; the implementation uses a worklist with per-state successor
/// counters and runs in time linear in the number of edges.
pub fn attractor(game: &GameGraph, player: Owner, targets: &BTreeSet<StateId>) -> BTreeSet<StateId> {
    let n = game.n_states();
    let preds = game.preds();
    let mut inside = vec![false; n];
    // Opponent states enter once this many successors have entered.
    let mut remaining: Vec<usize> = game.state_ids().map(|s| game.succ(s).len()).collect();
    let mut queue: Vec<StateId> = Vec::new();

    for &t in targets {
        if !inside[t.idx()] {
            inside[t.idx()] = true;
            queue.push(t);
        }
    }

    while let Some(s) = queue.pop() {
        for &p in &preds[s.idx()] {
            if inside[p.idx()] {
                continue;
            }
            let joins = if game.owner(p) == player {
                true
            } else {
                remaining[p.idx()] -= 1;
                remaining[p.idx()] == 0
            };
            if joins {
                inside[p.idx()] = true;
                queue.push(p);
            }
        }
    }

    game.state_ids().filter(|s| inside[s.idx()]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use core_model::GameBuilder;

    /// A small gadget: `a` (P1) can go to `b` or `c`; `b` (P2) can go to
    /// `t` or escape to `c`; `c` loops to itself; `t` loops to itself.
    fn gadget() -> GameGraph {
        let mut b = GameBuilder::new("gadget");
        let a = b.state("a", Owner::P1).unwrap();
        let bb = b.state("b", Owner::P2).unwrap();
        let c = b.state("c", Owner::P1).unwrap();
        let t = b.state("t", Owner::P1).unwrap();
        b.edge_ids(a, bb, 0);
        b.edge_ids(a, c, 0);
        b.edge_ids(bb, t, 0);
        b.edge_ids(bb, c, 0);
        b.edge_ids(c, c, 0);
        b.edge_ids(t, t, 0);
        b.init_id(a);
        b.finish().unwrap()
    }

    #[test]
    fn p2_escape_blocks_p1_attractor() {
        let g = gadget();
        let t = g.state_id("t").unwrap();
        let attr = attractor(&g, Owner::P1, &BTreeSet::from([t]));
        // `b` can escape to `c`, so only `t` itself is attracted.
        assert_eq!(attr, BTreeSet::from([t]));
    }

    #[test]
    fn p2_attractor_uses_its_own_choice() {
        let g = gadget();
        let t = g.state_id("t").unwrap();
        let attr = attractor(&g, Owner::P2, &BTreeSet::from([t]));
        // For P2 the roles flip: `b` may choose `t`, but `a` (P1-owned)
        // joins only if all successors lead in, which `c` prevents.
        let b = g.state_id("b").unwrap();
        assert_eq!(attr, BTreeSet::from([b, t]));
    }

    #[test]
    fn whole_state_space_when_targets_cover_sinks() {
        let g = gadget();
        let c = g.state_id("c").unwrap();
        let t = g.state_id("t").unwrap();
        let attr = attractor(&g, Owner::P1, &BTreeSet::from([c, t]));
        assert_eq!(attr.len(), 4);
    }
}
