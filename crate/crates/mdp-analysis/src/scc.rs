//! Strongly connected components over index graphs (petgraph-backed).

use petgraph::graph::{DiGraph, NodeIndex};

/// SCCs of the graph on `0..n` with the given edge list, as index sets.
/// Components come back in reverse topological order (every edge leaving a
/// component points to an earlier one); within a component, indices are
/// sorted ascending.
pub fn sccs(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Vec<Vec<usize>> {
    let mut g: DiGraph<(), ()> = DiGraph::with_capacity(n, 0);
    for _ in 0..n {
        g.add_node(());
    }
    for (u, v) in edges {
        g.add_edge(NodeIndex::new(u), NodeIndex::new(v), ());
    }
    petgraph::algo::tarjan_scc(&g)
        .into_iter()
        .map(|comp| {
            let mut ids: Vec<usize> = comp.into_iter().map(|ix| ix.index()).collect();
            ids.sort_unstable();
            ids
        })
        .collect()
}
