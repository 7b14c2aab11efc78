//! Exact Markov chain analysis: bottom components, stationary vectors,
//! expected mean payoff, reachability probabilities.

use std::collections::BTreeSet;

use core_model::{MarkovChain, Rational, StateId};

use crate::linalg::solve;
use crate::scc::sccs;

/// Bottom strongly connected components and the membership map.
pub(crate) struct ChainStructure {
    pub bsccs: Vec<Vec<usize>>,
    /// State index → BSCC index, `None` for transient states.
    pub in_bscc: Vec<Option<usize>>,
}

pub(crate) fn chain_structure(mc: &MarkovChain) -> ChainStructure {
    let g = mc.graph();
    let n = g.n_states();
    let mut edges = Vec::new();
    for s in g.state_ids() {
        for t in mc.delta(s).support() {
            edges.push((s.idx(), t.idx()));
        }
    }
    let mut bsccs = Vec::new();
    let mut in_bscc = vec![None; n];
    for comp in sccs(n, edges) {
        let inside: BTreeSet<usize> = comp.iter().copied().collect();
        let closed = comp.iter().all(|&i| {
            mc.delta(StateId(i as u32)).support().all(|t| inside.contains(&t.idx()))
        });
        // A singleton without a self-loop is transient even when closed-ness
        // holds vacuously; it must recur to be a bottom component.
        let recurrent = comp.len() > 1
            || mc.delta(StateId(comp[0] as u32)).support().any(|t| t.idx() == comp[0]);
        if closed && recurrent {
            for &i in &comp {
                in_bscc[i] = Some(bsccs.len());
            }
            bsccs.push(comp);
        }
    }
    ChainStructure { bsccs, in_bscc }
}

/// Stationary distribution of one BSCC: the unique `v` with `vP = v`,
/// `Σv = 1`, solved exactly.  One balance equation is redundant and is
/// replaced by the normalization row.
pub(crate) fn stationary(mc: &MarkovChain, bscc: &[usize]) -> Vec<Rational> {
    let k = bscc.len();
    let local = |i: usize| bscc.iter().position(|&x| x == i).expect("state inside the BSCC");
    let mut a = vec![vec![Rational::zero(); k]; k];
    for (col, &i) in bscc.iter().enumerate() {
        // Balance at state j (row j): Σ_i v_i P(i→j) − v_j = 0.
        for (t, p) in mc.delta(StateId(i as u32)).entries() {
            if p.is_positive() {
                a[local(t.idx())][col] = &a[local(t.idx())][col] + p;
            }
        }
        a[col][col] = &a[col][col] - &Rational::one();
    }
    let mut b = vec![Rational::zero(); k];
    a[k - 1] = vec![Rational::one(); k];
    b[k - 1] = Rational::one();
    let v = solve(a, b).expect("irreducible BSCC has a unique stationary vector");
    #[cfg(debug_assertions)]
    {
        // The dropped balance row must hold too: v is a fixed point of P.
        let mut flow = vec![Rational::zero(); k];
        for (col, &i) in bscc.iter().enumerate() {
            for (t, p) in mc.delta(StateId(i as u32)).entries() {
                if p.is_positive() {
                    flow[local(t.idx())] = &flow[local(t.idx())] + &(&v[col] * p);
                }
            }
        }
        debug_assert_eq!(flow, v, "stationary vector must satisfy vP = v");
        debug_assert_eq!(v.iter().cloned().sum::<Rational>(), Rational::one());
    }
    v
}

/// Per-state expected mean payoff of the chain: BSCC states carry their
/// component's stationary gain, transient states the absorption-weighted
/// combination (solved as `g = P·g` with BSCC values as boundary).
pub fn chain_gains(mc: &MarkovChain) -> Vec<Rational> {
    let (gains, _) = gains_with_structure(mc, &chain_structure(mc));
    gains
}

pub(crate) fn gains_with_structure(
    mc: &MarkovChain,
    st: &ChainStructure,
) -> (Vec<Rational>, Vec<Rational>) {
    let n = mc.graph().n_states();
    let mut gain = vec![Rational::zero(); n];
    for bscc in &st.bsccs {
        let v = stationary(mc, bscc);
        let g: Rational = bscc
            .iter()
            .zip(&v)
            .map(|(&i, vi)| vi * &mc.step_reward(StateId(i as u32)))
            .sum();
        for &i in bscc {
            gain[i] = g.clone();
        }
    }
    let transient: Vec<usize> = (0..n).filter(|&i| st.in_bscc[i].is_none()).collect();
    if !transient.is_empty() {
        let k = transient.len();
        let local = |i: usize| transient.iter().position(|&x| x == i);
        let mut a = vec![vec![Rational::zero(); k]; k];
        let mut b = vec![Rational::zero(); k];
        for (row, &i) in transient.iter().enumerate() {
            a[row][row] = Rational::one();
            for (t, p) in mc.delta(StateId(i as u32)).entries() {
                if !p.is_positive() {
                    continue;
                }
                match local(t.idx()) {
                    Some(col) => a[row][col] = &a[row][col] - p,
                    None => b[row] = &b[row] + &(p * &gain[t.idx()]),
                }
            }
        }
        let sol = solve(a, b).expect("transient states are absorbed almost surely");
        for (row, &i) in transient.iter().enumerate() {
            gain[i] = sol[row].clone();
        }
    }

    // Bias: solution of h = r − g + P·h, fixed to 0 at each BSCC's first
    // state; used by policy improvement to discriminate equal-gain moves.
    let mut bias = vec![Rational::zero(); n];
    for bscc in &st.bsccs {
        let k = bscc.len();
        let local = |i: usize| bscc.iter().position(|&x| x == i).expect("closed BSCC");
        let mut a = vec![vec![Rational::zero(); k]; k];
        let mut b = vec![Rational::zero(); k];
        for (row, &i) in bscc.iter().enumerate() {
            if row == 0 {
                a[row][row] = Rational::one();
                continue;
            }
            a[row][local(i)] = &a[row][local(i)] + &Rational::one();
            for (t, p) in mc.delta(StateId(i as u32)).entries() {
                if p.is_positive() {
                    a[row][local(t.idx())] = &a[row][local(t.idx())] - p;
                }
            }
            b[row] = &mc.step_reward(StateId(i as u32)) - &gain[i];
        }
        let sol = solve(a, b).expect("Poisson equation is solvable on a BSCC");
        for (row, &i) in bscc.iter().enumerate() {
            bias[i] = sol[row].clone();
        }
    }
    if !transient.is_empty() {
        let k = transient.len();
        let local = |i: usize| transient.iter().position(|&x| x == i);
        let mut a = vec![vec![Rational::zero(); k]; k];
        let mut b = vec![Rational::zero(); k];
        for (row, &i) in transient.iter().enumerate() {
            a[row][row] = Rational::one();
            b[row] = &mc.step_reward(StateId(i as u32)) - &gain[i];
            for (t, p) in mc.delta(StateId(i as u32)).entries() {
                if !p.is_positive() {
                    continue;
                }
                match local(t.idx()) {
                    Some(col) => a[row][col] = &a[row][col] - p,
                    None => b[row] = &b[row] + &(p * &bias[t.idx()]),
                }
            }
        }
        let sol = solve(a, b).expect("transient Poisson equation is solvable");
        for (row, &i) in transient.iter().enumerate() {
            bias[i] = sol[row].clone();
        }
    }
    (gain, bias)
}

/// Exact expected mean payoff of the chain started at `from`.
pub fn mc_expected_mp(mc: &MarkovChain, from: StateId) -> Rational {
    chain_gains(mc)[from.idx()]
        .clone()
}

/// Probability of visiting `targets` from `from`, within `horizon` steps if
/// given, else eventually.  Targets absorb: mass that enters stays.
///
/// The bounded variant pushes the initial Dirac mass forward step by step;
/// the unbounded one solves the linear reachability system on the states
/// that can reach a target at all.
pub fn reach_probability(
    mc: &MarkovChain,
    from: StateId,
    targets: &BTreeSet<StateId>,
    horizon: Option<u64>,
) -> Rational {
    let n = mc.graph().n_states();
    match horizon {
        Some(h) => {
            let mut mass = vec![Rational::zero(); n];
            mass[from.idx()] = Rational::one();
            for _ in 0..h {
                let mut next = vec![Rational::zero(); n];
                for i in 0..n {
                    if mass[i].is_zero() {
                        continue;
                    }
                    if targets.contains(&StateId(i as u32)) {
                        next[i] = &next[i] + &mass[i];
                        continue;
                    }
                    for (t, p) in mc.delta(StateId(i as u32)).entries() {
                        if p.is_positive() {
                            next[t.idx()] = &next[t.idx()] + &(p * &mass[i]);
                        }
                    }
                }
                mass = next;
            }
            targets.iter().map(|t| mass[t.idx()].clone()).sum()
        }
        None => {
            // Backward closure: states with any support path into targets.
            let mut can = vec![false; n];
            for &t in targets {
                can[t.idx()] = true;
            }
            let mut changed = true;
            while changed {
                changed = false;
                for i in 0..n {
                    if can[i] || targets.contains(&StateId(i as u32)) {
                        continue;
                    }
                    if mc.delta(StateId(i as u32)).support().any(|t| can[t.idx()]) {
                        can[i] = true;
                        changed = true;
                    }
                }
            }
            if !can[from.idx()] {
                return Rational::zero();
            }
            let unknown: Vec<usize> =
                (0..n).filter(|&i| can[i] && !targets.contains(&StateId(i as u32))).collect();
            let local = |i: usize| unknown.iter().position(|&x| x == i);
            let k = unknown.len();
            let mut a = vec![vec![Rational::zero(); k]; k];
            let mut b = vec![Rational::zero(); k];
            for (row, &i) in unknown.iter().enumerate() {
                a[row][row] = Rational::one();
                for (t, p) in mc.delta(StateId(i as u32)).entries() {
                    if !p.is_positive() {
                        continue;
                    }
                    if targets.contains(&t) {
                        b[row] = &b[row] + p;
                    } else if can[t.idx()] {
                        match local(t.idx()) {
                            Some(col) => a[row][col] = &a[row][col] - p,
                            None => unreachable!("non-target reaching states are indexed"),
                        }
                    }
                }
            }
            let sol = solve(a, b).expect("reachability system is nonsingular");
            if targets.contains(&from) {
                Rational::one()
            } else {
                sol[local(from.idx()).expect("from can reach the target")].clone()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use core_model::{Distribution, GameBuilder, MarkovChain, Owner};
    use std::collections::BTreeMap;

    fn chain(
        edges: &[(&str, &str, i64, Rational)],
        states: &[&str],
        init: &str,
    ) -> MarkovChain {
        let mut b = GameBuilder::new("mc");
        for s in states {
            b.state(s, Owner::P2).unwrap();
        }
        for (u, v, w, _) in edges {
            b.edge(u, v, *w).unwrap();
        }
        b.init(init).unwrap();
        let g = b.finish().unwrap();
        let mut delta: BTreeMap<core_model::StateId, Vec<(core_model::StateId, Rational)>> =
            BTreeMap::new();
        for (u, v, _, p) in edges {
            delta
                .entry(g.state_id(u).unwrap())
                .or_default()
                .push((g.state_id(v).unwrap(), p.clone()));
        }
        let delta = delta.into_iter().map(|(s, v)| (s, Distribution(v))).collect();
        MarkovChain::new(g, delta).unwrap()
    }

    #[test]
    fn deterministic_cycle_gain_is_the_cycle_mean() {
        let one = Rational::one;
        let mc = chain(
            &[("a", "b", 1, one()), ("b", "c", 1, one()), ("c", "a", -1, one())],
            &["a", "b", "c"],
            "a",
        );
        for s in mc.graph().state_ids() {
            assert_eq!(mc_expected_mp(&mc, s), Rational::new(1, 3));
        }
    }

    #[test]
    fn renewal_two_state_gain() {
        // a → b at 0; b returns at 9 or −1 with equal probability: gain 2.
        let h = || Rational::new(1, 2);
        let mc = chain(
            &[
                ("a", "b", 0, Rational::one()),
                ("b", "a", 9, h()),
                ("b", "a2", -1, h()),
                ("a2", "b", 0, Rational::one()),
            ],
            &["a", "b", "a2"],
            "a",
        );
        assert_eq!(mc_expected_mp(&mc, mc.graph().initial()), Rational::new(2, 1));
    }

    #[test]
    fn transient_states_mix_absorption() {
        // From s: 1/2 into the +1 loop, 1/2 into the −1 loop → expectation 0.
        let h = || Rational::new(1, 2);
        let mc = chain(
            &[
                ("s", "p", 0, h()),
                ("s", "m", 0, h()),
                ("p", "p", 1, Rational::one()),
                ("m", "m", -1, Rational::one()),
            ],
            &["s", "p", "m"],
            "s",
        );
        assert_eq!(mc_expected_mp(&mc, mc.graph().initial()), Rational::zero());
        assert_eq!(mc_expected_mp(&mc, mc.graph().state_id("p").unwrap()), Rational::one());
    }

    #[test]
    fn bounded_reach_accumulates_entry_mass() {
        let h = || Rational::new(1, 2);
        let mc = chain(
            &[
                ("a", "a", 0, h()),
                ("a", "t", 0, h()),
                ("t", "t", 0, Rational::one()),
            ],
            &["a", "t"],
            "a",
        );
        let t = BTreeSet::from([mc.graph().state_id("t").unwrap()]);
        assert_eq!(reach_probability(&mc, mc.graph().initial(), &t, Some(2)), Rational::new(3, 4));
        assert_eq!(reach_probability(&mc, mc.graph().initial(), &t, None), Rational::one());
    }

    #[test]
    fn unreachable_target_has_probability_zero() {
        let mc = chain(
            &[("a", "a", 0, Rational::one()), ("t", "t", 0, Rational::one())],
            &["a", "t"],
            "a",
        );
        let t = BTreeSet::from([mc.graph().state_id("t").unwrap()]);
        assert_eq!(reach_probability(&mc, mc.graph().initial(), &t, None), Rational::zero());
    }

    #[test]
    fn partial_absorption_probability() {
        // a: 1/3 to t, 1/3 to dead, 1/3 stay.
        let th = || Rational::new(1, 3);
        let mc = chain(
            &[
                ("a", "t", 0, th()),
                ("a", "d", 0, th()),
                ("a", "a", 0, th()),
                ("t", "t", 0, Rational::one()),
                ("d", "d", 0, Rational::one()),
            ],
            &["a", "t", "d"],
            "a",
        );
        let t = BTreeSet::from([mc.graph().state_id("t").unwrap()]);
        assert_eq!(reach_probability(&mc, mc.graph().initial(), &t, None), Rational::new(1, 2));
    }
}
