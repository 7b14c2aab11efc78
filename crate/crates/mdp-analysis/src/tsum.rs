//! Minimal expected cost to a target set.

use std::collections::{BTreeMap, BTreeSet};

use core_model::{ExtRational, Mdp, Owner, PureStrategy, Rational, StateId};

use crate::linalg::solve;

/// Exact minimal expected cost-to-target per state, with a memoryless
/// witness.  States that cannot reach the target almost surely under any
/// policy carry `∞`.
#[derive(Debug, Clone)]
pub struct TsSolution {
    pub value: Vec<ExtRational>,
    /// Defined on player-1 states with a finite value, targets excepted.
    pub policy: PureStrategy,
}

impl TsSolution {
    pub fn at(&self, s: StateId) -> &ExtRational {
        &self.value[s.idx()]
    }
}

/// States from which player 1 has a policy reaching `targets` with
/// probability one.
///
/// Greatest-fixed-point shape: repeatedly keep only states with a support
/// path to a target through the surviving set (stochastic states must also
/// keep their whole support inside it, or some branch could strand the
/// run).  The survivors admit a single memoryless policy witnessing
/// almost-sure reachability.
pub fn almost_sure_reach_region(mdp: &Mdp, targets: &BTreeSet<StateId>) -> BTreeSet<StateId> {
    region_with_ranks(mdp, targets).0
}

/// The region plus, per state, the round at which it joined the final
/// backward closure; following strictly rank-decreasing moves reaches a
/// target almost surely.
fn region_with_ranks(
    mdp: &Mdp,
    targets: &BTreeSet<StateId>,
) -> (BTreeSet<StateId>, BTreeMap<StateId, usize>) {
    let g = mdp.graph();
    let mut alive: BTreeSet<StateId> = g.state_ids().collect();
    loop {
        // Backward closure of the targets within `alive`, tracking rounds.
        let mut rank: BTreeMap<StateId, usize> =
            targets.iter().filter(|t| alive.contains(t)).map(|&t| (t, 0)).collect();
        let mut round = 0;
        loop {
            round += 1;
            let added: Vec<StateId> = alive
                .iter()
                .copied()
                .filter(|s| !rank.contains_key(s))
                .filter(|&s| match g.owner(s) {
                    Owner::P1 => g
                        .succ(s)
                        .iter()
                        .any(|(t, _)| rank.contains_key(t)),
                    Owner::P2 => {
                        let d = mdp.delta(s).expect("stochastic state has a distribution");
                        d.support().all(|t| alive.contains(&t))
                            && d.support().any(|t| rank.contains_key(&t))
                    }
                })
                .collect();
            if added.is_empty() {
                break;
            }
            for s in added {
                rank.insert(s, round);
            }
        }
        if rank.len() == alive.len() {
            return (alive, rank);
        }
        alive = rank.keys().copied().collect();
    }
}

/// Minimal expected accumulated cost until the first visit to `targets`.
///
/// Policy iteration over almost-surely-reaching policies: the initial
/// policy follows the reachability ranks, each round evaluates the induced
/// absorbing chain exactly and switches any player-1 state to a strictly
/// cheaper successor (first minimizer in declaration order, current kept on
/// ties).  Targets cost 0; outside the almost-sure region the value is `∞`
/// and the policy is left undefined.
pub fn min_expected_truncated_sum(mdp: &Mdp, targets: &BTreeSet<StateId>) -> TsSolution {
    let g = mdp.graph();
    let n = g.n_states();
    let (alive, rank) = region_with_ranks(mdp, targets);

    let mut policy = PureStrategy::new();
    for &s in &alive {
        if g.owner(s) != Owner::P1 || targets.contains(&s) {
            continue;
        }
        let to = g
            .succ(s)
            .iter()
            .map(|&(t, _)| t)
            .find(|t| rank.get(t).is_some_and(|&r| r < rank[&s]))
            .expect("every region state has a rank-decreasing move");
        policy.choice.insert(s, to);
    }

    // Interior states: finite value, unknown until solved.
    let interior: Vec<StateId> =
        alive.iter().copied().filter(|s| !targets.contains(s)).collect();
    let local = |s: StateId| interior.iter().position(|&x| x == s);
    let evaluate = |policy: &PureStrategy| -> Vec<Rational> {
        let k = interior.len();
        let mut a = vec![vec![Rational::zero(); k]; k];
        let mut b = vec![Rational::zero(); k];
        for (row, &s) in interior.iter().enumerate() {
            a[row][row] = &a[row][row] + &Rational::one();
            match g.owner(s) {
                Owner::P1 => {
                    let t = policy.get(s).expect("interior player state is covered");
                    let w = g.edge_weight(s, t).expect("policy edge exists");
                    b[row] = &b[row] + &Rational::from_int(w);
                    if let Some(col) = local(t) {
                        a[row][col] = &a[row][col] - &Rational::one();
                    }
                }
                Owner::P2 => {
                    for (t, p) in mdp.delta(s).expect("distribution").entries() {
                        if !p.is_positive() {
                            continue;
                        }
                        let w = g.edge_weight(s, *t).expect("support edge exists");
                        b[row] = &b[row] + &(p * &Rational::from_int(w));
                        if let Some(col) = local(*t) {
                            a[row][col] = &a[row][col] - p;
                        }
                    }
                }
            }
        }
        solve(a, b).expect("almost-surely absorbing policies have finite costs")
    };

    let mut values = evaluate(&policy);
    loop {
        let mut switched = false;
        for &s in interior.iter().filter(|&&s| g.owner(s) == Owner::P1) {
            let row = local(s).expect("interior");
            let value_of = |t: StateId, w: i64, values: &[Rational]| -> Option<Rational> {
                if targets.contains(&t) {
                    Some(Rational::from_int(w))
                } else {
                    let col = local(t)?;
                    Some(&Rational::from_int(w) + &values[col])
                }
            };
            let mut best: Option<(StateId, Rational)> = None;
            for &(t, w) in g.succ(s) {
                if !alive.contains(&t) {
                    continue;
                }
                let val = value_of(t, w, &values).expect("alive successors are indexed");
                if best.as_ref().is_none_or(|(_, bv)| val < *bv) {
                    best = Some((t, val));
                }
            }
            let (t, val) = best.expect("interior state keeps an alive successor");
            if val < values[row] {
                policy.choice.insert(s, t);
                switched = true;
            }
        }
        if !switched {
            break;
        }
        values = evaluate(&policy);
    }

    let mut value = vec![ExtRational::Infinite; n];
    for &t in targets {
        value[t.idx()] = ExtRational::Finite(Rational::zero());
    }
    for (i, &s) in interior.iter().enumerate() {
        value[s.idx()] = ExtRational::Finite(values[i].clone());
    }
    TsSolution { value, policy }
}
