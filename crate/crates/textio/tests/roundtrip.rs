//! Serialize-then-parse identity on randomly generated values, for every
//! file kind: games, machines over them (that pair is also the MDP case),
//! instance bundles, and verdict reports.

use core_model::{Distribution, GameBuilder, GameGraph, MachineBuilder, MooreMachine, Owner, Rational};
use proptest::prelude::*;
use textio::{
    parse_game, parse_instance, parse_machine, parse_verdict, serialize_game, serialize_instance,
    serialize_machine, serialize_verdict, InstanceFile, ObjectiveTag, Verdict,
};

#[derive(Clone, Debug)]
struct RawGame {
    owners: Vec<Owner>,
    // Successor index sets per state, non-empty; weights parallel them.
    succs: Vec<Vec<(usize, i64)>>,
    init: usize,
    targets: Vec<usize>,
}

fn raw_game(max_states: usize) -> impl Strategy<Value = RawGame> {
    (2..=max_states)
        .prop_flat_map(|n| {
            let owners = prop::collection::vec(prop::bool::ANY.prop_map(|b| if b { Owner::P1 } else { Owner::P2 }), n);
            let succs = prop::collection::vec(
                prop::collection::btree_set((0..n, -9i64..=9), 1..=n.min(3)).prop_map(|s| {
                    let mut seen = std::collections::BTreeSet::new();
                    s.into_iter().filter(|(t, _)| seen.insert(*t)).collect::<Vec<_>>()
                }),
                n,
            );
            let init = 0..n;
            let targets = prop::collection::vec(0..n, 0..=2);
            (owners, succs, init, targets)
        })
        .prop_map(|(owners, succs, init, targets)| RawGame { owners, succs, init, targets })
}

fn build(raw: &RawGame) -> GameGraph {
    let mut b = GameBuilder::new("rand");
    for i in 0..raw.owners.len() {
        b.state(&format!("s{i}"), raw.owners[i]).unwrap();
    }
    for (i, row) in raw.succs.iter().enumerate() {
        for &(t, w) in row {
            b.edge(&format!("s{i}"), &format!("s{t}"), w).unwrap();
        }
    }
    b.init(&format!("s{}", raw.init)).unwrap();
    for &t in &raw.targets {
        b.target(&format!("s{t}")).unwrap();
    }
    b.finish().unwrap()
}

fn build_machine(game: &GameGraph, mems: usize, picks: &[u64]) -> MooreMachine {
    let mut b = MachineBuilder::new("m");
    for k in 0..mems {
        b.memory(&format!("m{k}")).unwrap();
    }
    b.init("m0").unwrap();
    let mut pick = picks.iter().cycle();
    let mut take = || *pick.next().unwrap();
    for k in 0..mems {
        let mk = b.lookup(&format!("m{k}")).unwrap();
        for s in game.state_ids() {
            let next = format!("m{}", take() as usize % mems);
            let nk = b.lookup(&next).unwrap();
            b.update_id(mk, s, nk);
            if game.owner(s) == Owner::P2 {
                let succs: Vec<_> = game.succ(s).iter().map(|&(t, _)| t).collect();
                // Random non-empty sub-support, uniform probabilities.
                let chosen: Vec<_> = if succs.len() == 1 {
                    succs.clone()
                } else {
                    let mask = take() as usize % ((1 << succs.len()) - 1) + 1;
                    succs
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| mask & (1 << i) != 0)
                        .map(|(_, t)| *t)
                        .collect()
                };
                b.output_dist(mk, s, Distribution::uniform(&chosen));
            }
        }
    }
    b.finish().unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn game_round_trip(raw in raw_game(5)) {
        let g = build(&raw);
        let text = serialize_game(&g);
        let g2 = parse_game(&text, "rt.bwcg").unwrap();
        prop_assert_eq!(g, g2);
    }

    #[test]
    fn machine_round_trip(
        raw in raw_game(4),
        mems in 1usize..=3,
        picks in prop::collection::vec(any::<u64>(), 4..=16),
    ) {
        let g = build(&raw);
        let m = build_machine(&g, mems, &picks);
        let text = serialize_machine(&m, &g);
        let m2 = parse_machine(&text, "rt.bwcm", &g).unwrap();
        prop_assert_eq!(m, m2);
    }

    #[test]
    fn instance_round_trip(
        mu_n in -40i64..=40, mu_d in 1i64..=9,
        nu_n in -40i64..=40, nu_d in 1i64..=9,
        sp in prop::bool::ANY,
    ) {
        let inst = InstanceFile {
            game_path: "dir/g.bwcg".to_string(),
            model_path: "m.bwcm".to_string(),
            mu: Rational::new(mu_n, mu_d),
            nu: Rational::new(nu_n, nu_d),
            objective: if sp { ObjectiveTag::Sp } else { ObjectiveTag::Mp },
        };
        let text = serialize_instance(&inst);
        prop_assert_eq!(parse_instance(&text, "rt.bwci").unwrap(), inst);
    }

    #[test]
    fn verdict_round_trip(pairs in prop::collection::vec(("[a-z_]{1,8}", 0u64..1000), 0..6)) {
        let mut v = Verdict::new();
        for (k, n) in &pairs {
            v.push(k, n);
        }
        let text = serialize_verdict(&v);
        prop_assert_eq!(parse_verdict(&text, "rt").unwrap(), v);
    }
}
