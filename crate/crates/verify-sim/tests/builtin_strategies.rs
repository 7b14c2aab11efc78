//! End-to-end verifier checks on the built-in commute and mean-payoff
//! examples, against hand-computed worst cases and expectations.

use std::collections::BTreeSet;

use core_model::{
    Distribution, Exec, ExtRational, GameGraph, MachineBuilder, MooreMachine, Objective, Rational,
    StateId,
};
use instance_gen::{builtin, fig1_reference_strategy};
use verify_sim::{simulate, verify_mp, verify_sp};

fn r(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

fn fin(n: i64, d: i64) -> ExtRational {
    ExtRational::Finite(Rational::new(n, d))
}

/// One-memory deterministic player-1 strategy given as `state -> successor`.
fn memoryless_strategy(game: &GameGraph, rows: &[(&str, &str)]) -> MooreMachine {
    let mut mb = MachineBuilder::new("pure");
    let m0 = mb.memory("m0").expect("fresh machine");
    mb.init_id(m0);
    for s in game.state_ids() {
        mb.update_id(m0, s, m0);
    }
    for (src, dst) in rows {
        let s = game.state_id(src).expect("row names a state");
        let t = game.state_id(dst).expect("row names a successor");
        mb.output_dist(m0, s, Distribution::dirac(t));
    }
    mb.finish().expect("strategy is complete")
}

fn commute() -> (core_model::BwcInstance, BTreeSet<StateId>) {
    let inst = builtin("fig1").expect("builtin exists");
    let targets = match &inst.objective {
        Objective::ShortestPath(t) => t.clone(),
        Objective::MeanPayoff => unreachable!("the commute game is a shortest-path instance"),
    };
    (inst, targets)
}

#[test]
fn commute_reference_strategy_is_accepted() {
    let (inst, targets) = commute();
    let strat = fig1_reference_strategy(&inst.game);
    let rep = verify_sp(&inst.game, &strat, &inst.model, &inst.mu, &inst.nu, &targets);
    assert_eq!(rep.worst_case, fin(58, 1));
    assert_eq!(rep.expectation, fin(37453, 1000));
    assert!(rep.pass());
}

#[test]
fn commute_bicycle_is_safe_but_slow() {
    let (inst, targets) = commute();
    let strat = memoryless_strategy(
        &inst.game,
        &[
            ("home", "work"),
            ("waiting", "home"),
            ("medium", "work"),
            ("heavy", "work"),
            ("work", "work"),
        ],
    );
    let rep = verify_sp(&inst.game, &strat, &inst.model, &inst.mu, &inst.nu, &targets);
    assert_eq!(rep.worst_case, fin(45, 1));
    assert_eq!(rep.expectation, fin(45, 1));
    assert!(rep.pass_worst_case);
    assert!(!rep.pass_expectation);
    assert!(!rep.pass());
}

#[test]
fn commute_train_can_be_delayed_forever() {
    let (inst, targets) = commute();
    let strat = memoryless_strategy(
        &inst.game,
        &[
            ("home", "station"),
            ("waiting", "station"),
            ("medium", "work"),
            ("heavy", "work"),
            ("work", "work"),
        ],
    );
    let rep = verify_sp(&inst.game, &strat, &inst.model, &inst.mu, &inst.nu, &targets);
    assert!(rep.worst_case.is_infinite());
    let cycle = rep.cycle.expect("an unbounded run reports its cycle");
    assert!(cycle.contains(&"station".to_string()));
    assert!(cycle.contains(&"waiting".to_string()));
    // The model delays only with probability 1/10, so the train still
    // arrives almost surely: E = 2 + X with X = 9/10·35 + 1/10·(4 + X).
    assert_eq!(rep.expectation, fin(337, 9));
    assert!(!rep.pass_worst_case);
    assert!(rep.pass_expectation);
}

#[test]
fn commute_car_risks_heavy_traffic() {
    let (inst, targets) = commute();
    let strat = memoryless_strategy(
        &inst.game,
        &[
            ("home", "traffic"),
            ("waiting", "home"),
            ("medium", "work"),
            ("heavy", "work"),
            ("work", "work"),
        ],
    );
    let rep = verify_sp(&inst.game, &strat, &inst.model, &inst.mu, &inst.nu, &targets);
    assert_eq!(rep.worst_case, fin(71, 1));
    assert_eq!(rep.expectation, fin(33, 1));
    assert!(!rep.pass_worst_case);
    assert!(rep.pass_expectation);
}

#[test]
fn commute_simulation_agrees_with_the_exact_expectation() {
    let (inst, _) = commute();
    let strat = fig1_reference_strategy(&inst.game);
    let stats = simulate(
        &inst.game,
        &strat,
        &inst.model,
        &inst.objective,
        20_000,
        200,
        11,
        Exec::Sequential,
    );
    // Every run costs at most 58 with unit-or-larger weights, so the
    // 200-step horizon never truncates.
    assert_eq!(stats.truncated, 0.0);
    let err = (stats.mean - 37.453).abs();
    assert!(err <= 4.0 * stats.std_error(), "mean {} off by {err}", stats.mean);
}

/// The `{s9,s10,s11,s10t}` component of the mean-payoff example, with the
/// adversary model rebuilt over the restricted state ids.
fn low_component() -> (GameGraph, MooreMachine) {
    let inst = builtin("fig2").expect("builtin exists");
    let keep: BTreeSet<StateId> = ["s9", "s10", "s11", "s10t"]
        .iter()
        .map(|n| inst.game.state_id(n).expect("component state exists"))
        .collect();
    let init = inst.game.state_id("s9").expect("state exists");
    let sub = inst.game.restrict(&keep, init);
    let game = sub.graph;
    let mut mb = MachineBuilder::new("halves");
    let m0 = mb.memory("m0").expect("fresh machine");
    mb.init_id(m0);
    for s in game.state_ids() {
        mb.update_id(m0, s, m0);
    }
    let id = |n: &str| game.state_id(n).expect("restriction keeps names");
    mb.output_entry(m0, id("s11"), id("s10"), r(1, 2));
    mb.output_entry(m0, id("s11"), id("s10t"), r(1, 2));
    let model = mb.finish().expect("model is complete");
    (game, model)
}

#[test]
fn cautious_cycle_guarantees_one() {
    // Alternating s9/s10 earns mean 1 against every adversary, and exactly 1
    // in expectation — safe but short of the expectation threshold.
    let (game, model) = low_component();
    let strat = memoryless_strategy(&game, &[("s9", "s10"), ("s10", "s9"), ("s10t", "s9")]);
    let rep = verify_mp(&game, &strat, &model, &r(0, 1), &r(3, 2));
    assert_eq!(rep.worst_case, fin(1, 1));
    assert_eq!(rep.expectation, fin(1, 1));
    assert!(rep.pass_worst_case);
    assert!(!rep.pass_expectation);
}

#[test]
fn greedy_cycle_gains_more_but_loses_the_worst_case() {
    // Spinning through s11 averages 2 under the model, but an adversary that
    // always returns through the −1 twin forces mean −1/2.
    let (game, model) = low_component();
    let strat = memoryless_strategy(&game, &[("s9", "s10"), ("s10", "s11"), ("s10t", "s11")]);
    let rep = verify_mp(&game, &strat, &model, &r(0, 1), &r(3, 2));
    assert_eq!(rep.worst_case, fin(-1, 2));
    assert_eq!(rep.expectation, fin(2, 1));
    assert!(!rep.pass_worst_case);
    assert!(rep.pass_expectation);
}
