//! Exact shortest-path (truncated-sum) verification of a finite-memory
//! strategy.

use crate::mp::{strategy_product, StrategyProduct};
use crate::report::VerificationReport;
use core_model::{
    fix_both, validate_machine, ExtRational, GameGraph, MooreMachine, Owner, Rational, StateId,
};
use mdp_analysis::{reach_probability, solve_linear};
use std::collections::{BTreeMap, BTreeSet, VecDeque};

/// Verifies a finite-memory strategy for the truncated-sum objective. The
/// worst case considers every adversary: if any consistent outcome can avoid
/// `targets` forever the value is `∞` (with an offending product cycle
/// reported); otherwise the strategy product cut at targets is a DAG and the
/// worst case is its longest accumulated cost. The expectation is the exact
/// absorbing solve of the chain induced with the stochastic model.
pub fn verify_sp(
    game: &GameGraph,
    strategy: &MooreMachine,
    model: &MooreMachine,
    mu: &Rational,
    nu: &Rational,
    targets: &BTreeSet<StateId>,
) -> VerificationReport {
    assert!(!targets.is_empty(), "shortest-path verification needs a target");
    assert!(
        validate_machine(game, strategy, Owner::P1).is_empty(),
        "strategy must be a valid total player-1 machine"
    );
    assert!(
        validate_machine(game, model, Owner::P2).is_empty(),
        "model must be a valid total player-2 machine"
    );
    let product = strategy_product(game, strategy);
    let (worst, cycle) = worst_case_cost(&product, targets);

    let fixed = fix_both(game, strategy, model).expect("both machines are total");
    let chain = &fixed.chain;
    let chain_targets: BTreeSet<StateId> = fixed
        .origin
        .iter()
        .enumerate()
        .filter(|(_, &(s, _, _))| targets.contains(&s))
        .map(|(i, _)| StateId(i as u32))
        .collect();
    let init = chain.graph().initial();
    let expectation = if chain_targets.contains(&init) {
        ExtRational::Finite(Rational::zero())
    } else if reach_probability(chain, init, &chain_targets, None) != Rational::one() {
        ExtRational::Infinite
    } else {
        let unknown: Vec<usize> = (0..chain.graph().n_states())
            .filter(|&i| !chain_targets.contains(&StateId(i as u32)))
            .collect();
        let local: BTreeMap<usize, usize> =
            unknown.iter().enumerate().map(|(row, &i)| (i, row)).collect();
        let k = unknown.len();
        let mut a = vec![vec![Rational::zero(); k]; k];
        let mut b = vec![Rational::zero(); k];
        for (row, &i) in unknown.iter().enumerate() {
            let s = StateId(i as u32);
            a[row][row] = Rational::one();
            b[row] = chain.step_reward(s);
            for (t, p) in chain.delta(s).entries() {
                if p.is_positive() && !chain_targets.contains(t) {
                    let col = local[&t.idx()];
                    a[row][col] = &a[row][col] - p;
                }
            }
        }
        let sol = solve_linear(a, b).expect("almost-sure absorption gives a nonsingular system");
        ExtRational::Finite(sol[local[&init.idx()]].clone())
    };

    VerificationReport {
        objective: "sp",
        pass_worst_case: worst < ExtRational::Finite(mu.clone()),
        pass_expectation: expectation < ExtRational::Finite(nu.clone()),
        worst_case: worst,
        expectation,
        product_states: product.adj.len(),
        chain_states: chain.graph().n_states(),
        cycle,
    }
}

/// Longest accumulated cost from the product's initial node to the first
/// target visit, or `∞` plus a witness cycle when the adversary can avoid
/// targets forever. Only nodes reachable without crossing a target matter.
fn worst_case_cost(
    product: &StrategyProduct,
    targets: &BTreeSet<StateId>,
) -> (ExtRational, Option<Vec<String>>) {
    let n = product.adj.len();
    let is_target = |i: usize| targets.contains(&product.pairs[i].0);
    if is_target(0) {
        return (ExtRational::Finite(Rational::zero()), None);
    }
    // Nodes reachable from the start through non-target nodes only.
    let mut reach = vec![false; n];
    reach[0] = true;
    let mut queue = VecDeque::from([0usize]);
    while let Some(u) = queue.pop_front() {
        for &(v, _) in &product.adj[u] {
            if !reach[v] && !is_target(v) {
                reach[v] = true;
                queue.push_back(v);
            }
        }
    }
    // Cycle check among the reachable non-target nodes (iterative DFS).
    if let Some(cycle) = find_cycle(&product.adj, &reach) {
        let names = cycle.into_iter().map(|i| product.names[i].clone()).collect();
        return (ExtRational::Infinite, Some(names));
    }
    // Longest path over the acyclic remainder, then one step into a target.
    let order = topo_order(&product.adj, &reach);
    let mut dist: Vec<Option<i64>> = vec![None; n];
    dist[0] = Some(0);
    let mut worst: Option<i64> = None;
    for &u in &order {
        let Some(du) = dist[u] else { continue };
        for &(v, w) in &product.adj[u] {
            let c = du + w;
            if is_target(v) {
                if worst.is_none_or(|x| c > x) {
                    worst = Some(c);
                }
            } else if dist[v].is_none_or(|x| c > x) {
                dist[v] = Some(c);
            }
        }
    }
    let w = worst.expect("a deadlock-free acyclic region must step into a target");
    (ExtRational::Finite(Rational::from_int(w)), None)
}

/// One cycle among the flagged nodes, as the node sequence, if any exists.
fn find_cycle(adj: &[Vec<(usize, i64)>], active: &[bool]) -> Option<Vec<usize>> {
    const WHITE: u8 = 0;
    const GREY: u8 = 1;
    const BLACK: u8 = 2;
    let mut color = vec![WHITE; adj.len()];
    let mut path: Vec<usize> = Vec::new();
    for root in 0..adj.len() {
        if !active[root] || color[root] != WHITE {
            continue;
        }
        // Each stack frame remembers how many successors were tried.
        let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
        color[root] = GREY;
        path.push(root);
        while let Some(&(u, next)) = stack.last() {
            if next < adj[u].len() {
                stack.last_mut().expect("nonempty").1 += 1;
                let v = adj[u][next].0;
                if !active[v] {
                    continue;
                }
                match color[v] {
                    GREY => {
                        let at = path.iter().position(|&x| x == v).expect("grey is on path");
                        return Some(path[at..].to_vec());
                    }
                    WHITE => {
                        color[v] = GREY;
                        path.push(v);
                        stack.push((v, 0));
                    }
                    _ => {}
                }
            } else {
                color[u] = BLACK;
                path.pop();
                stack.pop();
            }
        }
    }
    None
}

/// Topological order of the flagged (acyclic) subgraph.
fn topo_order(adj: &[Vec<(usize, i64)>], active: &[bool]) -> Vec<usize> {
    let n = adj.len();
    let mut indeg = vec![0usize; n];
    for (u, row) in adj.iter().enumerate() {
        if !active[u] {
            continue;
        }
        for &(v, _) in row {
            if active[v] {
                indeg[v] += 1;
            }
        }
    }
    let mut queue: VecDeque<usize> =
        (0..n).filter(|&u| active[u] && indeg[u] == 0).collect();
    let mut order = Vec::new();
    while let Some(u) = queue.pop_front() {
        order.push(u);
        for &(v, _) in &adj[u] {
            if active[v] {
                indeg[v] -= 1;
                if indeg[v] == 0 {
                    queue.push_back(v);
                }
            }
        }
    }
    order
}
