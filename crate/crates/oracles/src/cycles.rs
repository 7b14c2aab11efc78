//! Simple-cycle enumeration for small graphs.

use core_model::{GameGraph, Rational, StateId};

fn mean(total: i128, len: usize) -> Rational {
    let t = i64::try_from(total).expect("cycle weight exceeds i64");
    Rational::new(t, len as i64)
}

/// Means of every simple cycle, sorted and deduplicated. Each cycle is
/// enumerated rooted at its smallest state index, so the cost is exponential
/// only in the number of simple cycles; intended for graphs of ~10 states.
pub fn enumerate_cycle_means(game: &GameGraph) -> Vec<Rational> {
    let n = game.n_states();
    let mut means = Vec::new();
    let mut on_path = vec![false; n];
    for root in 0..n {
        let rid = StateId(root as u32);
        let mut path: Vec<(StateId, usize, i128)> = vec![(rid, 0, 0)];
        on_path[root] = true;
        while let Some(&mut (v, ref mut i, acc)) = path.last_mut() {
            let succs = game.succ(v);
            if *i < succs.len() {
                let (t, w) = succs[*i];
                *i += 1;
                if t.idx() < root {
                    continue;
                }
                if t == rid {
                    means.push(mean(acc + w as i128, path.len()));
                } else if !on_path[t.idx()] {
                    on_path[t.idx()] = true;
                    path.push((t, 0, acc + w as i128));
                }
            } else {
                on_path[v.idx()] = false;
                path.pop();
            }
        }
    }
    means.sort();
    means.dedup();
    means
}

/// Smallest simple-cycle mean, or `None` for an acyclic graph.
pub fn min_cycle_mean_enumerated(game: &GameGraph) -> Option<Rational> {
    enumerate_cycle_means(game).into_iter().next()
}

#[cfg(test)]
mod tests {
    use super::*;
    use core_model::{GameBuilder, Owner};

    fn two_loop_game() -> GameGraph {
        // Self-loop of mean 2 at a; 2-cycle a-b of mean 1/2.
        let mut b = GameBuilder::new("g");
        b.state("a", Owner::P1).unwrap();
        b.state("b", Owner::P1).unwrap();
        b.edge("a", "a", 2).unwrap();
        b.edge("a", "b", 3).unwrap();
        b.edge("b", "a", -2).unwrap();
        b.init("a").unwrap();
        b.finish().unwrap()
    }

    #[test]
    fn finds_all_simple_cycles() {
        let g = two_loop_game();
        assert_eq!(enumerate_cycle_means(&g), vec![Rational::new(1, 2), Rational::from_int(2)]);
        assert_eq!(min_cycle_mean_enumerated(&g), Some(Rational::new(1, 2)));
    }

    #[test]
    fn acyclic_has_no_cycles() {
        let mut b = GameBuilder::new("g");
        b.state("a", Owner::P1).unwrap();
        b.state("b", Owner::P1).unwrap();
        b.edge("a", "b", 1).unwrap();
        // b deadlocks; fine for a pure cycle scan.
        b.init("a").unwrap();
        let g = b.finish().unwrap();
        assert_eq!(min_cycle_mean_enumerated(&g), None);
    }

    #[test]
    fn three_cycle_mean() {
        let mut b = GameBuilder::new("g");
        b.state("x", Owner::P1).unwrap();
        b.state("y", Owner::P2).unwrap();
        b.state("z", Owner::P1).unwrap();
        b.edge("x", "y", 1).unwrap();
        b.edge("y", "z", 0).unwrap();
        b.edge("z", "x", -2).unwrap();
        b.init("x").unwrap();
        let g = b.finish().unwrap();
        assert_eq!(enumerate_cycle_means(&g), vec![Rational::new(-1, 3)]);
    }
}
