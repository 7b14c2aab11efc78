//! Probabilistic bisimulation on weighted Markov chains.

use core_model::{MarkovChain, Rational, StateId};
use std::collections::BTreeMap;

/// True iff the two chains' initial states are probabilistically bisimilar:
/// equivalent states carry the same target flag and agree, for every pair
/// (edge weight, equivalence class), on the total probability of moving
/// there. Partition refinement on the disjoint union until stable, so chains
/// of different sizes compare correctly.
pub fn chains_bisimilar(a: &MarkovChain, b: &MarkovChain) -> bool {
    let na = a.graph().n_states();
    let n = na + b.graph().n_states();
    let side = |i: usize| if i < na { (a, i, 0) } else { (b, i - na, na) };
    let mut class: Vec<usize> = (0..n)
        .map(|i| {
            let (c, li, _) = side(i);
            usize::from(c.graph().is_target(StateId(li as u32)))
        })
        .collect();
    loop {
        let mut keys: BTreeMap<(usize, Vec<((i64, usize), Rational)>), usize> = BTreeMap::new();
        let mut next = vec![0usize; n];
        for (i, slot) in next.iter_mut().enumerate() {
            let (c, li, off) = side(i);
            let s = StateId(li as u32);
            let mut sig: BTreeMap<(i64, usize), Rational> = BTreeMap::new();
            for (t, p) in c.delta(s).entries() {
                if !p.is_positive() {
                    continue;
                }
                let w = c.graph().edge_weight(s, *t).expect("support within edges");
                let key = (w, class[t.idx() + off]);
                let cur = sig.get(&key).cloned().unwrap_or_else(Rational::zero);
                sig.insert(key, &cur + p);
            }
            let key = (class[i], sig.into_iter().collect::<Vec<_>>());
            let fresh = keys.len();
            *slot = *keys.entry(key).or_insert(fresh);
        }
        let stable = keys.len() == class.iter().collect::<std::collections::BTreeSet<_>>().len();
        class = next;
        if stable {
            break;
        }
    }
    let ia = a.graph().initial().idx();
    let ib = na + b.graph().initial().idx();
    class[ia] == class[ib]
}

#[cfg(test)]
mod tests {
    use super::*;
    use core_model::{Distribution, GameBuilder, MarkovChain, Owner};
    use std::collections::BTreeMap as Map;

    /// Builds a chain from rows (name, owner ignored): edges with weights and
    /// probability entries.
    fn chain(rows: &[(&str, Vec<(&str, i64, Rational)>)]) -> MarkovChain {
        let mut gb = GameBuilder::new("c");
        for (name, _) in rows {
            gb.state(name, Owner::P2).unwrap();
        }
        for (name, out) in rows {
            for (t, w, _) in out {
                gb.edge(name, t, *w).unwrap();
            }
        }
        gb.init(rows[0].0).unwrap();
        let g = gb.finish().unwrap();
        let mut delta: Map<StateId, Distribution> = Map::new();
        for (name, out) in rows {
            let s = g.state_id(name).unwrap();
            let entries =
                out.iter().map(|(t, _, p)| (g.state_id(t).unwrap(), p.clone())).collect();
            delta.insert(s, Distribution(entries));
        }
        MarkovChain::new(g, delta).unwrap()
    }

    fn half() -> Rational {
        Rational::new(1, 2)
    }

    #[test]
    fn unrolled_copy_is_bisimilar() {
        // A 1-state loop vs. a 2-state unrolled loop with identical weights.
        let a = chain(&[("x", vec![("x", 3, Rational::one())])]);
        let b = chain(&[
            ("u", vec![("v", 3, Rational::one())]),
            ("v", vec![("u", 3, Rational::one())]),
        ]);
        assert!(chains_bisimilar(&a, &b));
    }

    #[test]
    fn weight_difference_separates() {
        let a = chain(&[("x", vec![("x", 3, Rational::one())])]);
        let b = chain(&[("x", vec![("x", 4, Rational::one())])]);
        assert!(!chains_bisimilar(&a, &b));
    }

    #[test]
    fn probability_difference_separates() {
        let a = chain(&[
            ("x", vec![("x", 0, half()), ("y", 1, half())]),
            ("y", vec![("x", 0, Rational::one())]),
        ]);
        let b = chain(&[
            ("x", vec![("x", 0, Rational::new(1, 3)), ("y", 1, Rational::new(2, 3))]),
            ("y", vec![("x", 0, Rational::one())]),
        ]);
        assert!(!chains_bisimilar(&a, &b));
    }

    #[test]
    fn split_probabilities_to_equivalent_states_merge() {
        // Half/half into two bisimilar states equals a single full edge.
        let a = chain(&[
            ("x", vec![("p", 1, half()), ("q", 1, half())]),
            ("p", vec![("x", 2, Rational::one())]),
            ("q", vec![("x", 2, Rational::one())]),
        ]);
        let b = chain(&[
            ("x", vec![("p", 1, Rational::one())]),
            ("p", vec![("x", 2, Rational::one())]),
        ]);
        assert!(chains_bisimilar(&a, &b));
    }
}
