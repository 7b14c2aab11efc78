//! Minimum mean cycle of a weighted directed graph.

use core_model::Rational;
use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use std::collections::BTreeMap;

/// Compares fractions `a/b < c/d` (positive denominators) without building
/// rationals; i128 keeps the cross products exact.
fn frac_lt(a: (i64, i64), b: (i64, i64)) -> bool {
    (a.0 as i128) * (b.1 as i128) < (b.0 as i128) * (a.1 as i128)
}

/// Minimum mean weight over all cycles of the successor-list graph, `None`
/// when it is acyclic. Runs Karp's formula inside each strongly connected
/// component; rows of the walk-weight table are rolled so memory stays
/// linear in the component size.
pub fn min_mean_cycle(adj: &[Vec<(usize, i64)>]) -> Option<Rational> {
    let mut g = DiGraph::<(), ()>::new();
    let nodes: Vec<_> = (0..adj.len()).map(|_| g.add_node(())).collect();
    for (u, row) in adj.iter().enumerate() {
        for &(v, _) in row {
            g.add_edge(nodes[u], nodes[v], ());
        }
    }
    let mut best: Option<(i64, i64)> = None;
    for scc in tarjan_scc(&g) {
        let comp: Vec<usize> = scc.iter().map(|n| n.index()).collect();
        if comp.len() == 1 {
            let u = comp[0];
            if !adj[u].iter().any(|&(v, _)| v == u) {
                continue;
            }
        }
        let m = karp_component(adj, &comp);
        best = Some(match best {
            None => m,
            Some(b) => {
                if frac_lt(m, b) {
                    m
                } else {
                    b
                }
            }
        });
    }
    best.map(|(n, d)| Rational::new(n, d))
}

/// Karp's minimum cycle mean inside one strongly connected component:
/// `min_v max_j (D_k(v) − D_j(v)) / (k − j)` with `D_j(v)` the least weight
/// of a j-edge walk from an arbitrary source. Two rolling passes: the first
/// keeps only row k, the second folds the per-node maxima.
fn karp_component(adj: &[Vec<(usize, i64)>], comp: &[usize]) -> (i64, i64) {
    let k = comp.len();
    let local: BTreeMap<usize, usize> =
        comp.iter().enumerate().map(|(i, &u)| (u, i)).collect();
    let roll = |on_row: &mut dyn FnMut(usize, &[Option<i64>])| {
        let mut cur: Vec<Option<i64>> = vec![None; k];
        cur[0] = Some(0);
        on_row(0, &cur);
        for j in 1..=k {
            let mut next: Vec<Option<i64>> = vec![None; k];
            for (ul, &u) in comp.iter().enumerate() {
                if let Some(du) = cur[ul] {
                    for &(v, w) in &adj[u] {
                        if let Some(&vl) = local.get(&v) {
                            let cand = du + w;
                            if next[vl].is_none_or(|x| cand < x) {
                                next[vl] = Some(cand);
                            }
                        }
                    }
                }
            }
            cur = next;
            on_row(j, &cur);
        }
    };
    let mut dk: Vec<Option<i64>> = Vec::new();
    roll(&mut |j, row| {
        if j == k {
            dk = row.to_vec();
        }
    });
    let mut node_max: Vec<Option<(i64, i64)>> = vec![None; k];
    roll(&mut |j, row| {
        if j == k {
            return;
        }
        for v in 0..k {
            if let (Some(dkv), Some(djv)) = (dk[v], row[v]) {
                let cand = (dkv - djv, (k - j) as i64);
                if node_max[v].is_none_or(|cur| frac_lt(cur, cand)) {
                    node_max[v] = Some(cand);
                }
            }
        }
    });
    node_max
        .into_iter()
        .flatten()
        .reduce(|a, b| if frac_lt(b, a) { b } else { a })
        .expect("strongly connected component contains a cycle")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_self_loop() {
        let adj = vec![vec![(0usize, 3i64)]];
        assert_eq!(min_mean_cycle(&adj), Some(Rational::from_int(3)));
    }

    #[test]
    fn acyclic_graph_has_no_cycle() {
        let adj = vec![vec![(1usize, 5i64)], vec![]];
        assert_eq!(min_mean_cycle(&adj), None);
    }

    #[test]
    fn picks_the_lighter_of_two_cycles() {
        // 0 ↔ 1 with means 1/2 and a heavier self-loop on 2.
        let adj = vec![
            vec![(1usize, 1i64), (2, 0)],
            vec![(0, 0)],
            vec![(2, 7)],
        ];
        assert_eq!(min_mean_cycle(&adj), Some(Rational::new(1, 2)));
    }

    #[test]
    fn negative_cycle_wins() {
        // Two disjoint components: {0,1} mean -3/2, {2} mean 4.
        let adj = vec![
            vec![(1usize, -1i64)],
            vec![(0, -2)],
            vec![(2, 4)],
        ];
        assert_eq!(min_mean_cycle(&adj), Some(Rational::new(-3, 2)));
    }

    #[test]
    fn parity_constrained_walks_are_handled() {
        // Pure 2-cycle: only even-length walks return to the source.
        let adj = vec![vec![(1usize, 5i64)], vec![(0, -1)]];
        assert_eq!(min_mean_cycle(&adj), Some(Rational::from_int(2)));
    }
}
