//! Randomized cross-checks against subset scans and policy enumeration.

use std::collections::{BTreeMap, BTreeSet};

use core_model::{Distribution, GameBuilder, Mdp, Owner, Rational, StateId};
use game_solvers::mp_optimal_value;
use mdp_analysis::{max_expected_mp, mec_decompose, min_expected_truncated_sum, mwec};
use proptest::prelude::*;

/// Build an MDP from per-state successor masks, weight rows and probability
/// numerators.  Stochastic rows put positive probability on every chosen
/// edge, so the support relation equals the edge relation.  With `dirac`
/// set, stochastic states keep only their first chosen successor.
fn build_mdp(owners: &[bool], rows: &[(u32, Vec<i64>, Vec<u32>)], dirac: bool) -> Mdp {
    let n = owners.len();
    let mut b = GameBuilder::new("rand");
    let ids: Vec<StateId> = (0..n)
        .map(|i| {
            let o = if owners[i] { Owner::P1 } else { Owner::P2 };
            b.state(&format!("s{i}"), o).unwrap()
        })
        .collect();
    let mut delta = BTreeMap::new();
    for (i, (mask, ws, nums)) in rows.iter().enumerate() {
        let mut mask = *mask;
        if dirac && !owners[i] {
            mask &= mask.wrapping_neg();
        }
        let chosen: Vec<usize> = (0..n).filter(|j| mask & (1 << j) != 0).collect();
        for &j in &chosen {
            b.edge_ids(ids[i], ids[j], ws[j]);
        }
        if !owners[i] {
            let total: u32 = chosen.iter().map(|&j| nums[j]).sum();
            let entries = chosen
                .iter()
                .map(|&j| (ids[j], Rational::new(nums[j] as i64, total as i64)))
                .collect();
            delta.insert(ids[i], Distribution(entries));
        }
    }
    b.init_id(ids[0]);
    Mdp::new(b.finish().unwrap(), delta).unwrap()
}

fn arb_mdp(max_n: usize, max_w: i64) -> impl Strategy<Value = Mdp> {
    (1..=max_n).prop_flat_map(move |n| {
        let owners = prop::collection::vec(any::<bool>(), n);
        let rows = prop::collection::vec(
            (
                1u32..(1u32 << n),
                prop::collection::vec(-max_w..=max_w, n),
                prop::collection::vec(1u32..=4, n),
            ),
            n,
        );
        (owners, rows).prop_map(move |(owners, rows)| build_mdp(&owners, &rows, false))
    })
}

/// Like `arb_mdp` but with Dirac stochastic states and positive weights only
/// on the cost variant.
fn arb_dirac_mdp(max_n: usize, max_w: i64) -> impl Strategy<Value = Mdp> {
    (1..=max_n).prop_flat_map(move |n| {
        let owners = prop::collection::vec(any::<bool>(), n);
        let rows = prop::collection::vec(
            (
                1u32..(1u32 << n),
                prop::collection::vec(-max_w..=max_w, n),
                prop::collection::vec(1u32..=4, n),
            ),
            n,
        );
        (owners, rows).prop_map(move |(owners, rows)| build_mdp(&owners, &rows, true))
    })
}

fn arb_cost_mdp(max_n: usize) -> impl Strategy<Value = (Mdp, u32)> {
    (1..=max_n)
        .prop_flat_map(move |n| {
            let owners = prop::collection::vec(any::<bool>(), n);
            let rows = prop::collection::vec(
                (
                    1u32..(1u32 << n),
                    prop::collection::vec(1i64..=3, n),
                    prop::collection::vec(1u32..=4, n),
                ),
                n,
            );
            let target_mask = 1u32..(1u32 << n);
            (owners, rows, target_mask)
        })
        .prop_map(|(owners, rows, tm)| (build_mdp(&owners, &rows, false), tm))
}

fn subsets(states: &[StateId]) -> impl Iterator<Item = BTreeSet<StateId>> + '_ {
    let n = states.len();
    (1u32..(1 << n)).map(move |mask| {
        (0..n).filter(|i| mask & (1 << i) != 0).map(|i| states[i]).collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn mec_matches_subset_scan(m in arb_mdp(5, 2)) {
        let states: Vec<StateId> = m.graph().state_ids().collect();
        let ecs: Vec<BTreeSet<StateId>> =
            subsets(&states).filter(|u| oracles::is_end_component(&m, u)).collect();
        let maximal: BTreeSet<BTreeSet<StateId>> = ecs
            .iter()
            .filter(|u| !ecs.iter().any(|v| v.len() > u.len() && u.is_subset(v)))
            .cloned()
            .collect();
        let dec = mec_decompose(&m);
        let got: BTreeSet<BTreeSet<StateId>> =
            dec.components.iter().map(|c| c.states.clone()).collect();
        prop_assert_eq!(&got, &maximal);
        for (i, c) in dec.components.iter().enumerate() {
            for &s in &states {
                prop_assert_eq!(dec.membership[s.idx()] == Some(i), c.states.contains(&s));
            }
        }
    }

    #[test]
    fn mwec_matches_subset_scan(m in arb_mdp(4, 2)) {
        let brute: BTreeSet<BTreeSet<StateId>> =
            oracles::mwec_subsets(&m, &Rational::zero()).into_iter().collect();
        let got: BTreeSet<BTreeSet<StateId>> =
            mwec(&m, m.graph()).into_iter().map(|c| c.states).collect();
        prop_assert_eq!(got, brute);
    }

    #[test]
    fn nested_winning_ec_gains_are_monotone(m in arb_mdp(4, 2)) {
        let support = m.support_game();
        let states: Vec<StateId> = m.graph().state_ids().collect();
        let winning: Vec<BTreeSet<StateId>> = subsets(&states)
            .filter(|u| oracles::is_end_component(&m, u))
            .filter(|u| {
                let first = *u.iter().next().unwrap();
                let r = support.restrict(u, first);
                oracles::mp_game_values(&r.graph).iter().all(Rational::is_positive)
            })
            .collect();
        let gain = |u: &BTreeSet<StateId>| -> Rational {
            let first = *u.iter().next().unwrap();
            let sub = m.restrict(u, first);
            sub.graph()
                .state_ids()
                .map(|s| oracles::max_expected_mp(&sub, s))
                .max()
                .unwrap()
        };
        let gains: Vec<Rational> = winning.iter().map(gain).collect();
        for (i, u) in winning.iter().enumerate() {
            for (j, v) in winning.iter().enumerate() {
                if u.is_subset(v) {
                    prop_assert!(gains[i] <= gains[j]);
                }
            }
        }
    }

    #[test]
    fn gains_match_policy_enumeration(m in arb_mdp(4, 2)) {
        let sol = max_expected_mp(&m);
        let chain = oracles::induced_chain(&m, &sol.policy.choice);
        for s in m.graph().state_ids() {
            prop_assert_eq!(&sol.gain[s.idx()], &oracles::max_expected_mp(&m, s));
            // The single witness policy attains the optimum from every state
            // at once.
            prop_assert_eq!(
                &oracles::expected_mp_of_chain(&chain, s.idx()),
                &sol.gain[s.idx()]
            );
        }
    }

    #[test]
    fn dirac_models_reduce_to_one_player_games(m in arb_dirac_mdp(4, 2)) {
        // Every stochastic state moves deterministically, so maximizing the
        // expectation is the one-player mean-payoff game on the same graph.
        let sol = max_expected_mp(&m);
        for s in m.graph().state_ids() {
            prop_assert_eq!(&sol.gain[s.idx()], &mp_optimal_value(m.graph(), s));
        }
    }

    #[test]
    fn truncated_sums_match_policy_enumeration((m, tm) in arb_cost_mdp(4)) {
        let g = m.graph();
        let targets: BTreeSet<StateId> =
            g.state_ids().filter(|s| tm & (1 << s.idx()) != 0).collect();
        let sol = min_expected_truncated_sum(&m, &targets);
        let t_idx: BTreeSet<usize> = targets.iter().map(|s| s.idx()).collect();
        // Complete the witness policy on dead states so a chain can be
        // induced; those states are unreachable from the finite region.
        let mut full = sol.policy.choice.clone();
        for s in g.state_ids().filter(|&s| g.owner(s) == Owner::P1) {
            full.entry(s).or_insert_with(|| g.succ(s)[0].0);
        }
        let chain = oracles::induced_chain(&m, &full);
        for s in g.state_ids() {
            let brute = oracles::min_expected_ts(&m, &targets, s);
            prop_assert_eq!(&brute, &sol.value[s.idx()]);
            if let Some(v) = sol.value[s.idx()].finite() {
                prop_assert_eq!(
                    oracles::expected_ts_of_chain(&chain, &t_idx, s.idx()),
                    core_model::ExtRational::Finite(v.clone())
                );
            }
        }
    }
}
