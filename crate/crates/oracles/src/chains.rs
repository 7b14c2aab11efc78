//! Exact Markov chain analysis with a private linear solver.

use crate::mdps::BruteChain;
use core_model::{ExtRational, Rational};
use std::collections::BTreeSet;

/// Solves `A x = b` by Gaussian elimination with partial (first non-zero)
/// pivoting over exact rationals. Panics on singular systems.
pub fn solve_linear(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Vec<Rational> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .expect("singular linear system in oracle");
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = a[col][col].recip();
        for c in col..n {
            a[col][c] = &a[col][c] * &inv;
        }
        b[col] = &b[col] * &inv;
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in col..n {
                    a[r][c] = &a[r][c] - &(&f * &a[col][c]);
                }
                b[r] = &b[r] - &(&f * &b[col]);
            }
        }
    }
    b
}

fn sccs(n: usize, succ: &dyn Fn(usize) -> Vec<usize>) -> Vec<Vec<usize>> {
    // Iterative Tarjan.
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut next_index = 0;
    let mut out = Vec::new();
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        let mut work = vec![(root, 0usize)];
        while let Some(&mut (v, ref mut i)) = work.last_mut() {
            if *i == 0 {
                index[v] = next_index;
                low[v] = next_index;
                next_index += 1;
                stack.push(v);
                on_stack[v] = true;
            }
            let succs = succ(v);
            if *i < succs.len() {
                let w = succs[*i];
                *i += 1;
                if index[w] == usize::MAX {
                    work.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                work.pop();
                if let Some(&(parent, _)) = work.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    out.push(comp);
                }
            }
        }
    }
    out
}

/// Exact expected mean payoff of a finite chain from `from`: stationary value
/// of each bottom SCC, weighted by absorption probabilities.
pub fn expected_mp_of_chain(chain: &BruteChain, from: usize) -> Rational {
    let n = chain.n;
    let comps = sccs(n, &|v| chain.delta[v].iter().map(|&(t, _)| t).collect());
    let mut comp_of = vec![usize::MAX; n];
    for (ci, comp) in comps.iter().enumerate() {
        for &v in comp {
            comp_of[v] = ci;
        }
    }
    let bottom: Vec<bool> = comps
        .iter()
        .map(|comp| {
            comp.iter().all(|&v| chain.delta[v].iter().all(|&(t, _)| comp_of[t] == comp_of[v]))
        })
        .collect();

    // Stationary value of each bottom SCC.
    let mut comp_value = vec![Rational::zero(); comps.len()];
    for (ci, comp) in comps.iter().enumerate() {
        if !bottom[ci] {
            continue;
        }
        let k = comp.len();
        let pos: std::collections::BTreeMap<usize, usize> =
            comp.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        // Rows 0..k-1: balance equations v·P = v for all but the last state,
        // last row: Σ v = 1.
        let mut a = vec![vec![Rational::zero(); k]; k];
        let mut b = vec![Rational::zero(); k];
        for row in 0..k - 1 {
            let target = comp[row];
            for (i, &v) in comp.iter().enumerate() {
                for &(t, ref p) in &chain.delta[v] {
                    if t == target {
                        a[row][i] = &a[row][i] + p;
                    }
                }
            }
            a[row][pos[&target]] = &a[row][pos[&target]] - &Rational::one();
        }
        for i in 0..k {
            a[k - 1][i] = Rational::one();
        }
        b[k - 1] = Rational::one();
        let v = solve_linear(a, b);
        let mut value = Rational::zero();
        for (i, &s) in comp.iter().enumerate() {
            let r: Rational = chain.delta[s]
                .iter()
                .map(|&(t, ref p)| p * &Rational::from_int(chain.weight[s][&t]))
                .sum();
            value = value + &v[i] * &r;
        }
        comp_value[ci] = value;
    }

    // Expected value per state: fixed on bottom states, linear elsewhere.
    let transient: Vec<usize> = (0..n).filter(|&v| !bottom[comp_of[v]]).collect();
    if transient.is_empty() || bottom[comp_of[from]] {
        return comp_value[comp_of[from]].clone();
    }
    let pos: std::collections::BTreeMap<usize, usize> =
        transient.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let k = transient.len();
    let mut a = vec![vec![Rational::zero(); k]; k];
    let mut b = vec![Rational::zero(); k];
    for (row, &v) in transient.iter().enumerate() {
        a[row][row] = Rational::one();
        for &(t, ref p) in &chain.delta[v] {
            if let Some(&j) = pos.get(&t) {
                a[row][j] = &a[row][j] - p;
            } else {
                b[row] = &b[row] + &(p * &comp_value[comp_of[t]]);
            }
        }
    }
    let x = solve_linear(a, b);
    x[pos[&from]].clone()
}

/// Exact expected truncated sum (total weight until first hitting `targets`)
/// from `from`; `Infinite` when the target is not reached almost surely.
pub fn expected_ts_of_chain(
    chain: &BruteChain,
    targets: &BTreeSet<usize>,
    from: usize,
) -> ExtRational {
    if targets.contains(&from) {
        return ExtRational::Finite(Rational::zero());
    }
    let n = chain.n;
    // States that reach the target with probability 1: complement of the set
    // from which the chain can avoid the target forever. A state avoids iff
    // it can reach a closed recurrent set disjoint from targets; equivalently
    // prob-1 reach = greatest fixpoint check via the standard two-pass:
    // first states that can reach targets at all, then prune states that can
    // escape into the can't-reach region.
    let mut can_reach = targets.clone();
    loop {
        let mut changed = false;
        for v in 0..n {
            if can_reach.contains(&v) {
                continue;
            }
            if chain.delta[v].iter().any(|&(t, _)| can_reach.contains(&t)) {
                can_reach.insert(v);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    // Almost-sure reach: remove states that can wander into the non-reaching part.
    let mut sure: BTreeSet<usize> = can_reach.clone();
    loop {
        let mut changed = false;
        let snapshot = sure.clone();
        for &v in &snapshot {
            if targets.contains(&v) {
                continue;
            }
            if chain.delta[v].iter().any(|&(t, _)| !sure.contains(&t)) {
                sure.remove(&v);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    if !sure.contains(&from) {
        return ExtRational::Infinite;
    }
    let transient: Vec<usize> = (0..n).filter(|v| sure.contains(v) && !targets.contains(v)).collect();
    let pos: std::collections::BTreeMap<usize, usize> =
        transient.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let k = transient.len();
    let mut a = vec![vec![Rational::zero(); k]; k];
    let mut b = vec![Rational::zero(); k];
    for (row, &v) in transient.iter().enumerate() {
        a[row][row] = Rational::one();
        for &(t, ref p) in &chain.delta[v] {
            b[row] = &b[row] + &(p * &Rational::from_int(chain.weight[v][&t]));
            if let Some(&j) = pos.get(&t) {
                a[row][j] = &a[row][j] - p;
            }
        }
    }
    let x = solve_linear(a, b);
    ExtRational::Finite(x[pos[&from]].clone())
}

/// Probability of hitting `targets` within at most `horizon` steps, by
/// explicit path expansion (exponential; keep the horizon small).
pub fn reach_prob_paths(
    chain: &BruteChain,
    targets: &BTreeSet<usize>,
    from: usize,
    horizon: usize,
) -> Rational {
    fn go(
        chain: &BruteChain,
        targets: &BTreeSet<usize>,
        at: usize,
        left: usize,
        weight: Rational,
    ) -> Rational {
        if targets.contains(&at) {
            return weight;
        }
        if left == 0 {
            return Rational::zero();
        }
        let mut total = Rational::zero();
        for &(t, ref p) in &chain.delta[at] {
            total = total + go(chain, targets, t, left - 1, &weight * p);
        }
        total
    }
    go(chain, targets, from, horizon, Rational::one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn cycle_chain() -> BruteChain {
        // 3-cycle with weights 1, 1, -1: mean payoff 1/3.
        BruteChain {
            n: 3,
            delta: vec![
                vec![(1, Rational::one())],
                vec![(2, Rational::one())],
                vec![(0, Rational::one())],
            ],
            weight: vec![
                BTreeMap::from([(1, 1)]),
                BTreeMap::from([(2, 1)]),
                BTreeMap::from([(0, -1)]),
            ],
        }
    }

    #[test]
    fn deterministic_cycle_mean() {
        assert_eq!(expected_mp_of_chain(&cycle_chain(), 0), Rational::new(1, 3));
    }

    #[test]
    fn branching_chain_mp() {
        // 0 -> 1 always (0); 1 -> 0 w.p. 1/2 (+9), 1 -> 2 w.p. 1/2 (-1);
        // 2 -> 3 (+1); 3 -> 0 (+1). Renewal value 5/3.
        let h = Rational::new(1, 2);
        let c = BruteChain {
            n: 4,
            delta: vec![
                vec![(1, Rational::one())],
                vec![(0, h.clone()), (2, h)],
                vec![(3, Rational::one())],
                vec![(0, Rational::one())],
            ],
            weight: vec![
                BTreeMap::from([(1, 0)]),
                BTreeMap::from([(0, 9), (2, -1)]),
                BTreeMap::from([(3, 1)]),
                BTreeMap::from([(0, 1)]),
            ],
        };
        assert_eq!(expected_mp_of_chain(&c, 0), Rational::new(5, 3));
    }

    #[test]
    fn truncated_sum_geometric() {
        // 0 -> 1 w.p. 1/2 (cost 1) else stay (cost 1); 1 absorbing target.
        // Expected steps to absorb = 2, each step costs 1.
        let h = Rational::new(1, 2);
        let c = BruteChain {
            n: 2,
            delta: vec![vec![(0, h.clone()), (1, h)], vec![(1, Rational::one())]],
            weight: vec![BTreeMap::from([(0, 1), (1, 1)]), BTreeMap::from([(1, 1)])],
        };
        assert_eq!(
            expected_ts_of_chain(&c, &BTreeSet::from([1]), 0),
            ExtRational::Finite(Rational::from_int(2))
        );
    }

    #[test]
    fn truncated_sum_unreachable() {
        let c = cycle_chain();
        assert_eq!(expected_ts_of_chain(&c, &BTreeSet::new(), 0), ExtRational::Infinite);
    }

    #[test]
    fn reach_prob_small_horizon() {
        let h = Rational::new(1, 2);
        let c = BruteChain {
            n: 2,
            delta: vec![vec![(0, h.clone()), (1, h)], vec![(1, Rational::one())]],
            weight: vec![BTreeMap::from([(0, 1), (1, 1)]), BTreeMap::from([(1, 1)])],
        };
        let t = BTreeSet::from([1]);
        assert_eq!(reach_prob_paths(&c, &t, 0, 1), Rational::new(1, 2));
        assert_eq!(reach_prob_paths(&c, &t, 0, 3), Rational::new(7, 8));
    }
}
