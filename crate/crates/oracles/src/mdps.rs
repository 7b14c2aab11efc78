//! Brute-force MDP analysis: policy enumeration, end-component scans by
//! subset enumeration, and a reference decision procedure for the
//! mean-payoff threshold problem against a memoryless stochastic model.

use crate::chains::{expected_mp_of_chain, expected_ts_of_chain};
use crate::games::mp_game_values;
use core_model::{
    transform_weights_mp, Distribution, ExtRational, GameBuilder, GameGraph, Mdp, MooreMachine,
    Owner, Rational, StateId,
};
use std::collections::{BTreeMap, BTreeSet};

/// A chain over plain indices, detached from any graph bookkeeping.
/// `delta[s]` lists positive-probability moves; `weight[s]` maps each
/// possible successor to the weight of the edge taken.
#[derive(Clone, Debug)]
pub struct BruteChain {
    pub n: usize,
    pub delta: Vec<Vec<(usize, Rational)>>,
    pub weight: Vec<BTreeMap<usize, i64>>,
}

/// Every pure memoryless controller policy: one successor per player-1 state.
pub fn all_policies(mdp: &Mdp) -> Vec<BTreeMap<StateId, StateId>> {
    let g = mdp.graph();
    let mut out = vec![BTreeMap::new()];
    for s in g.state_ids() {
        if g.owner(s) != Owner::P1 {
            continue;
        }
        let mut next = Vec::new();
        for base in &out {
            for &(t, _) in g.succ(s) {
                let mut m: BTreeMap<StateId, StateId> = base.clone();
                m.insert(s, t);
                next.push(m);
            }
        }
        out = next;
    }
    out
}

/// The chain obtained by fixing `policy` at player-1 states and the model's
/// distribution (restricted to its support) at player-2 states.
pub fn induced_chain(mdp: &Mdp, policy: &BTreeMap<StateId, StateId>) -> BruteChain {
    let g = mdp.graph();
    let n = g.n_states();
    let mut delta = Vec::with_capacity(n);
    let mut weight = Vec::with_capacity(n);
    for s in g.state_ids() {
        let mut w = BTreeMap::new();
        for &(t, wt) in g.succ(s) {
            w.entry(t.idx()).or_insert(wt);
        }
        let row = match g.owner(s) {
            Owner::P1 => vec![(policy[&s].idx(), Rational::one())],
            Owner::P2 => mdp
                .delta(s)
                .expect("stochastic state has a distribution")
                .entries()
                .iter()
                .filter(|(_, p)| p.is_positive())
                .map(|(t, p)| (t.idx(), p.clone()))
                .collect(),
        };
        delta.push(row);
        weight.push(w);
    }
    BruteChain { n, delta, weight }
}

/// Max over pure memoryless policies of the expected mean payoff from `from`.
pub fn max_expected_mp(mdp: &Mdp, from: StateId) -> Rational {
    all_policies(mdp)
        .iter()
        .map(|p| expected_mp_of_chain(&induced_chain(mdp, p), from.idx()))
        .max()
        .expect("at least one policy")
}

/// Min over pure memoryless policies of the expected total weight before
/// first hitting `targets` from `from`; `Infinite` when no policy reaches
/// the targets almost surely.
pub fn min_expected_ts(mdp: &Mdp, targets: &BTreeSet<StateId>, from: StateId) -> ExtRational {
    let t: BTreeSet<usize> = targets.iter().map(|s| s.idx()).collect();
    all_policies(mdp)
        .iter()
        .map(|p| expected_ts_of_chain(&induced_chain(mdp, p), &t, from.idx()))
        .min()
        .expect("at least one policy")
}

/// True iff `u` is an end component: player-2 supports stay inside, every
/// player-1 state keeps a successor inside, and the internal edge relation
/// (player-1 edges plus positive-probability moves) lets every state reach
/// every state in one or more steps.
pub fn is_end_component(mdp: &Mdp, u: &BTreeSet<StateId>) -> bool {
    if u.is_empty() {
        return false;
    }
    let g = mdp.graph();
    for &s in u {
        match g.owner(s) {
            Owner::P1 => {
                if !g.succ(s).iter().any(|&(t, _)| u.contains(&t)) {
                    return false;
                }
            }
            Owner::P2 => {
                let d = mdp.delta(s).expect("stochastic state has a distribution");
                if d.entries().iter().any(|(t, p)| p.is_positive() && !u.contains(t)) {
                    return false;
                }
            }
        }
    }
    // Internal adjacency; strong connectivity with paths of length >= 1.
    let internal: BTreeMap<StateId, Vec<StateId>> = u
        .iter()
        .map(|&s| {
            let row = match g.owner(s) {
                Owner::P1 => {
                    g.succ(s).iter().map(|&(t, _)| t).filter(|t| u.contains(t)).collect()
                }
                Owner::P2 => mdp.support_succ(s).into_iter().filter(|t| u.contains(t)).collect(),
            };
            (s, row)
        })
        .collect();
    for &s in u {
        let mut seen = BTreeSet::new();
        let mut queue: Vec<StateId> = internal[&s].clone();
        while let Some(v) = queue.pop() {
            if seen.insert(v) {
                queue.extend(internal[&v].iter().copied());
            }
        }
        if !u.iter().all(|t| seen.contains(t)) {
            return false;
        }
    }
    true
}

/// Maximal end components whose internal game (adversary restricted to the
/// model's support) has value strictly above `threshold` at every state,
/// found by scanning all `2^n` state subsets.
pub fn mwec_subsets(mdp: &Mdp, threshold: &Rational) -> Vec<BTreeSet<StateId>> {
    let g = mdp.graph();
    let states: Vec<StateId> = g.state_ids().collect();
    let n = states.len();
    assert!(n <= 20, "subset scan limited to 20 states");
    let support = mdp.support_game();
    let mut winners: Vec<BTreeSet<StateId>> = Vec::new();
    for mask in 1u32..(1 << n) {
        let u: BTreeSet<StateId> =
            (0..n).filter(|i| mask & (1 << i) != 0).map(|i| states[i]).collect();
        if !is_end_component(mdp, &u) {
            continue;
        }
        let first = *u.iter().next().expect("non-empty");
        let r = support.restrict(&u, first);
        let vals = mp_game_values(&r.graph);
        if r.graph.state_ids().all(|s| vals[s.idx()] > *threshold) {
            winners.push(u);
        }
    }
    let maximal: Vec<BTreeSet<StateId>> = winners
        .iter()
        .filter(|u| !winners.iter().any(|v| v.len() > u.len() && u.is_subset(v)))
        .cloned()
        .collect();
    maximal
}

/// Reference decision for "some finite-memory controller beats mean payoff
/// `mu` on every consistent outcome and expectation `nu` against the model":
/// shift weights so the worst-case threshold becomes zero, cut to the
/// worst-case winning region, keep weights only inside maximal winning end
/// components, and maximize the expected mean payoff there.
///
/// Returns the decision plus the optimal expectation in the original weight
/// scale (`None` when the worst-case requirement already fails).
pub fn decide_mp(
    game: &GameGraph,
    model: &MooreMachine,
    mu: &Rational,
    nu: &Rational,
) -> (bool, Option<Rational>) {
    assert!(model.is_memoryless(), "reference decision handles memoryless models only");
    let m0 = model.initial_memory();
    let (tg, nu2) = transform_weights_mp(game, mu, nu);
    let vals = mp_game_values(&tg);
    let swc: BTreeSet<StateId> =
        tg.state_ids().filter(|s| vals[s.idx()].is_positive()).collect();
    if !swc.contains(&tg.initial()) {
        return (false, None);
    }
    let r = tg.restrict(&swc, tg.initial());
    let mut delta = BTreeMap::new();
    for (&full, &sub) in &r.to_sub {
        if r.graph.owner(sub) != Owner::P2 {
            continue;
        }
        let d = model.output(m0, full).expect("model covers every stochastic state");
        let entries = d
            .entries()
            .iter()
            .map(|(t, p)| {
                let ts = *r.to_sub.get(t).expect("model support stays in the winning region");
                (ts, p.clone())
            })
            .collect();
        delta.insert(sub, Distribution(entries));
    }
    let mdp = Mdp::new(r.graph.clone(), delta.clone()).expect("valid restricted model");
    let winning = mwec_subsets(&mdp, &Rational::zero());
    let mut gb = GameBuilder::new(r.graph.name());
    for s in r.graph.state_ids() {
        gb.state(r.graph.state_name(s), r.graph.owner(s)).expect("unique names");
    }
    for s in r.graph.state_ids() {
        for &(t, w) in r.graph.succ(s) {
            let keep = winning.iter().any(|u| u.contains(&s) && u.contains(&t));
            gb.edge_ids(s, t, if keep { w } else { 0 });
        }
    }
    gb.init_id(r.graph.initial());
    let pruned = gb.finish().expect("initial present");
    let pruned_mdp = Mdp::new(pruned, delta).expect("same distributions still valid");
    let star2 = max_expected_mp(&pruned_mdp, r.graph.initial());
    let yes = star2 > nu2;
    let a = i64::try_from(mu.numer()).expect("mu numerator fits i64");
    let b = i64::try_from(mu.denom()).expect("mu denominator fits i64");
    let star = &(star2 + Rational::from_int(a)) / &Rational::from_int(b);
    (yes, Some(star))
}
