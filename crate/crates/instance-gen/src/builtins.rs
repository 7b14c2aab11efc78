//! The built-in instances and the two parametric families.
//!
//! Drawn arenas with several weights between one state pair are encoded
//! without parallel edges: mean-payoff games add a *twin* of the destination
//! (same owner, same outgoing edges) carrying the second weight, and
//! shortest-path games split a long edge across a pass-through dummy state so
//! that both halves keep weight at least 1 (`d` becomes `⌈d/2⌉ + ⌊d/2⌋`).

use crate::GenError;
use core_model::{
    BwcInstance, Distribution, GameBuilder, GameGraph, MachineBuilder, MooreMachine, Objective,
    Owner, Rational,
};

fn r(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

/// One-memory stochastic model; `rows` lists the outgoing distribution of
/// every adversary state.
fn memoryless_model(
    game: &GameGraph,
    name: &str,
    rows: &[(&str, &[(&str, Rational)])],
) -> MooreMachine {
    let mut mb = MachineBuilder::new(name);
    let m0 = mb.memory("m0").expect("fresh machine");
    mb.init_id(m0);
    for s in game.state_ids() {
        mb.update_id(m0, s, m0);
    }
    for (src, entries) in rows {
        let sid = game.state_id(src).expect("model row names a game state");
        let dist = Distribution(
            entries
                .iter()
                .map(|(dst, p)| (game.state_id(dst).expect("model successor exists"), p.clone()))
                .collect(),
        );
        mb.output_dist(m0, sid, dist);
    }
    mb.finish().expect("model is complete")
}

/// Looks up a builtin by name. Parameterized families are written
/// `fig6(<x>)` and `fig7(<mu>)`.
pub fn builtin(name: &str) -> Result<BwcInstance, GenError> {
    let parse_arg = |inner: &str, what: &str| -> Result<u64, GenError> {
        inner
            .parse::<u64>()
            .map_err(|_| GenError::BadParameter(format!("malformed {what} parameter `{inner}`")))
    };
    match name {
        "fig1" => Ok(fig1()),
        "fig2" => Ok(fig2()),
        "fig3" => Ok(fig3()),
        "fig5" => Ok(fig5()),
        "fig6" => Err(GenError::BadParameter(
            "fig6 needs a parameter, e.g. fig6(10)".to_string(),
        )),
        "fig7" => Err(GenError::BadParameter(
            "fig7 needs a parameter, e.g. fig7(13)".to_string(),
        )),
        _ => {
            if let Some(inner) = name.strip_prefix("fig6(").and_then(|s| s.strip_suffix(')')) {
                gen_fig6(parse_arg(inner, "fig6")?)
            } else if let Some(inner) = name.strip_prefix("fig7(").and_then(|s| s.strip_suffix(')'))
            {
                gen_sp_family(parse_arg(inner, "fig7")?)
            } else {
                Err(GenError::UnknownBuiltin(name.to_string()))
            }
        }
    }
}

/// The commuting scenario: train, car, or bicycle to work. The train may be
/// delayed indefinitely, the car risks heavy traffic, the bicycle is slow but
/// reliable. Budget 60 minutes, expected-time threshold 38.
///
/// Car durations 30 and 70 are split across pass-through dummies (`medium`,
/// `heavy`) into 15+15 and 35+35 so every weight stays at least 1; totals per
/// hop are unchanged.
pub fn fig1() -> BwcInstance {
    let mut gb = GameBuilder::new("fig1");
    gb.state("home", Owner::P1).unwrap();
    gb.state("station", Owner::P2).unwrap();
    gb.state("waiting", Owner::P1).unwrap();
    gb.state("traffic", Owner::P2).unwrap();
    gb.state("medium", Owner::P1).unwrap();
    gb.state("heavy", Owner::P1).unwrap();
    gb.state("work", Owner::P1).unwrap();
    for (src, dst, w) in [
        ("home", "station", 2),
        ("home", "traffic", 1),
        ("home", "work", 45),
        ("station", "waiting", 1),
        ("station", "work", 35),
        ("waiting", "home", 2),
        ("waiting", "station", 3),
        ("traffic", "work", 20),
        ("traffic", "medium", 15),
        ("traffic", "heavy", 35),
        ("medium", "work", 15),
        ("heavy", "work", 35),
        ("work", "work", 1),
    ] {
        gb.edge(src, dst, w).unwrap();
    }
    gb.init("home").unwrap();
    gb.target("work").unwrap();
    let game = gb.finish().unwrap();
    let model = memoryless_model(
        &game,
        "commute",
        &[
            ("station", &[("waiting", r(1, 10)), ("work", r(9, 10))]),
            ("traffic", &[("work", r(2, 10)), ("medium", r(7, 10)), ("heavy", r(1, 10))]),
        ],
    );
    let targets = game.targets().clone();
    BwcInstance::new(game, model, r(60, 1), r(38, 1), Objective::ShortestPath(targets))
        .expect("builtin is valid")
}

/// The strategy that takes the train, waits out at most two delays, and after
/// a third delay goes back home and rides the bicycle. Worst case 58,
/// expected time 37453/1000 under the [`fig1`] model.
pub fn fig1_reference_strategy(game: &GameGraph) -> MooreMachine {
    let mut mb = MachineBuilder::new("three_delays");
    let mems: Vec<_> =
        ["c0", "c1", "c2", "cb"].iter().map(|n| mb.memory(n).expect("fresh machine")).collect();
    let (c0, c1, c2, cb) = (mems[0], mems[1], mems[2], mems[3]);
    mb.init_id(c0);
    let id = |name: &str| game.state_id(name).expect("strategy built for the commute game");
    let waiting = id("waiting");
    // The delay counter advances each time a delay is waited out.
    for (mem, next) in [(c0, c1), (c1, c2), (c2, cb), (cb, cb)] {
        for s in game.state_ids() {
            mb.update_id(mem, s, if s == waiting { next } else { mem });
        }
    }
    for m in [c0, c1, c2] {
        mb.output_dist(m, id("home"), Distribution::dirac(id("station")));
    }
    for m in [c0, c1] {
        mb.output_dist(m, id("waiting"), Distribution::dirac(id("station")));
    }
    // Third delay observed: head home, then take the bicycle.
    mb.output_dist(c2, id("waiting"), Distribution::dirac(id("home")));
    mb.output_dist(cb, id("home"), Distribution::dirac(id("work")));
    mb.output_dist(cb, id("waiting"), Distribution::dirac(id("home")));
    for m in mems {
        mb.output_dist(m, id("medium"), Distribution::dirac(id("work")));
        mb.output_dist(m, id("heavy"), Distribution::dirac(id("work")));
        mb.output_dist(m, id("work"), Distribution::dirac(id("work")));
    }
    mb.finish().expect("strategy is complete")
}

/// The running mean-payoff example: eleven drawn states plus three twins.
/// Three end components have expected gains 4, 3, and 2; only the latter two
/// survive the worst-case requirement, and the optimal expectation achievable
/// while guaranteeing a positive mean payoff is exactly 3.
///
/// The adversary model plays both copies of each split pair with probability
/// 1/2, except at `s7` where the +1 copy has probability 1 and the −1 copy
/// probability 0 (so that edge exists but is never played by the model).
pub fn fig2() -> BwcInstance {
    let mut gb = GameBuilder::new("fig2");
    for (name, owner) in [
        ("s1", Owner::P1),
        ("s2", Owner::P2),
        ("s3", Owner::P1),
        ("s4", Owner::P2),
        ("s5", Owner::P2),
        ("s6", Owner::P1),
        ("s7", Owner::P2),
        ("s8", Owner::P2),
        ("s9", Owner::P1),
        ("s10", Owner::P1),
        ("s11", Owner::P2),
        ("s3t", Owner::P1),
        ("s6t", Owner::P1),
        ("s10t", Owner::P1),
    ] {
        gb.state(name, owner).unwrap();
    }
    for (src, dst, w) in [
        ("s1", "s9", 0),
        ("s1", "s2", -1),
        ("s2", "s1", -1),
        ("s2", "s3", -1),
        ("s3", "s5", -1),
        ("s3", "s4", 0),
        ("s4", "s3", 17),
        ("s4", "s3t", -1),
        ("s5", "s6", 0),
        ("s5", "s1", -1),
        ("s6", "s7", 0),
        ("s6", "s9", 0),
        ("s6", "s8", 0),
        ("s7", "s6", 1),
        ("s7", "s6t", -1),
        ("s8", "s6", 13),
        ("s8", "s6t", -1),
        ("s9", "s10", 1),
        ("s10", "s9", 1),
        ("s10", "s11", 0),
        ("s11", "s10", 9),
        ("s11", "s10t", -1),
        // Twins copy their base state's choices.
        ("s3t", "s5", -1),
        ("s3t", "s4", 0),
        ("s6t", "s7", 0),
        ("s6t", "s9", 0),
        ("s6t", "s8", 0),
        ("s10t", "s9", 1),
        ("s10t", "s11", 0),
    ] {
        gb.edge(src, dst, w).unwrap();
    }
    gb.init("s1").unwrap();
    let game = gb.finish().unwrap();
    let half = || r(1, 2);
    let model = memoryless_model(
        &game,
        "halves",
        &[
            ("s2", &[("s1", half()), ("s3", half())]),
            ("s4", &[("s3", half()), ("s3t", half())]),
            ("s5", &[("s6", half()), ("s1", half())]),
            ("s7", &[("s6", r(1, 1)), ("s6t", r(0, 1))]),
            ("s8", &[("s6", half()), ("s6t", half())]),
            ("s11", &[("s10", half()), ("s10t", half())]),
        ],
    );
    BwcInstance::new(game, model, r(0, 1), r(3, 2), Objective::MeanPayoff)
        .expect("builtin is valid")
}

/// A five-state arena whose maximal end components are `{s2}` and
/// `{s1,s3,s4,s5}`; the large one fails the worst-case requirement yet
/// contains the winning singleton `{s5}`, so the worst-case-winning
/// components are `{s2}` and `{s5}`.
pub fn fig3() -> BwcInstance {
    let mut gb = GameBuilder::new("fig3");
    for (name, owner) in [
        ("s1", Owner::P1),
        ("s2", Owner::P1),
        ("s3", Owner::P2),
        ("s4", Owner::P1),
        ("s5", Owner::P1),
    ] {
        gb.state(name, owner).unwrap();
    }
    for (src, dst, w) in [
        ("s1", "s2", 0),
        ("s1", "s3", 0),
        ("s2", "s2", 1),
        ("s3", "s4", 0),
        ("s3", "s5", 0),
        ("s4", "s1", -1),
        ("s5", "s1", 0),
        ("s5", "s5", 10),
    ] {
        gb.edge(src, dst, w).unwrap();
    }
    gb.init("s1").unwrap();
    let game = gb.finish().unwrap();
    let model =
        memoryless_model(&game, "fair", &[("s3", &[("s4", r(1, 2)), ("s5", r(1, 2))])]);
    BwcInstance::new(game, model, r(0, 1), r(19, 2), Objective::MeanPayoff)
        .expect("builtin is valid")
}

/// A game where only infinite memory could profit from a losing component:
/// with finite memory the best expectation compatible with the worst-case
/// threshold −3/2 is −1 (the safe self-loop), even though gambling in the
/// left component would raise it. Thresholds (−3/2, −5/4).
pub fn fig5() -> BwcInstance {
    let mut gb = GameBuilder::new("fig5");
    for (name, owner) in
        [("s0", Owner::P1), ("s1", Owner::P2), ("s2", Owner::P1), ("s0t", Owner::P1)]
    {
        gb.state(name, owner).unwrap();
    }
    for (src, dst, w) in [
        ("s0", "s1", 0),
        ("s0", "s2", 0),
        ("s1", "s0", 4),
        ("s1", "s0t", -4),
        ("s2", "s2", -1),
        ("s0t", "s1", 0),
        ("s0t", "s2", 0),
    ] {
        gb.edge(src, dst, w).unwrap();
    }
    gb.init("s0").unwrap();
    let game = gb.finish().unwrap();
    let model =
        memoryless_model(&game, "gambler", &[("s1", &[("s0", r(9, 10)), ("s0t", r(1, 10))])]);
    BwcInstance::new(game, model, r(-3, 2), r(-5, 4), Objective::MeanPayoff)
        .expect("builtin is valid")
}

/// The compensation family: the adversary state can push the running sum down
/// by `x` in one step (or up by `x + 5`, each with probability 1/2). Keeping
/// the worst case safe after a drop requires rebuilding the sum over
/// `⌊x/2⌋ + 1` rounds of the +1 cycle, so winning strategies need memory that
/// grows linearly with `x`. Thresholds (0, 11/10); the optimal expectation is
/// 5/4 independently of `x`.
pub fn gen_fig6(x: u64) -> Result<BwcInstance, GenError> {
    if x < 1 {
        return Err(GenError::BadParameter("fig6 needs x >= 1".to_string()));
    }
    let too_big = || GenError::BadParameter(format!("fig6 parameter {x} is too large"));
    let xi = i64::try_from(x).map_err(|_| too_big())?;
    let up = xi.checked_add(5).ok_or_else(too_big)?;
    let mut gb = GameBuilder::new("fig6");
    for (name, owner) in
        [("s1", Owner::P1), ("s2", Owner::P1), ("s3", Owner::P2), ("s1t", Owner::P1)]
    {
        gb.state(name, owner).unwrap();
    }
    for (src, dst, w) in [
        ("s1", "s2", 1),
        ("s1", "s3", 0),
        ("s2", "s1", 1),
        ("s3", "s1", -xi),
        ("s3", "s1t", up),
        ("s1t", "s2", 1),
        ("s1t", "s3", 0),
    ] {
        gb.edge(src, dst, w).unwrap();
    }
    gb.init("s1").unwrap();
    let game = gb.finish().unwrap();
    let model =
        memoryless_model(&game, "swing", &[("s3", &[("s1", r(1, 2)), ("s1t", r(1, 2))])]);
    Ok(BwcInstance::new(game, model, r(0, 1), r(11, 10), Objective::MeanPayoff)
        .expect("family member is valid"))
}

/// Expected cost of reaching the target in a [`gen_sp_family`] game when the
/// risky edge is tried exactly `n` times before falling back to the direct
/// edge of weight `⌊mu/2⌋`.
pub fn sp_family_expected_cost(mu: u64, n: u32) -> Rational {
    let half_mu = Rational::new((mu / 2) as i64, 1);
    let mut sum = Rational::zero();
    let mut pow = r(2, 1); // 1/2^(i-1) for i = 0
    for _ in 0..n {
        sum = sum + pow.clone();
        pow = pow * r(1, 2);
    }
    // pow is now 1/2^(n-1); halve once more for 1/2^n.
    sum + pow * r(1, 2) * half_mu
}

/// The retry family: a risky hop of weight 1 reaches the target with
/// probability 1/2 and bounces back otherwise; a direct edge costs `⌊mu/2⌋`.
/// Under budget `mu` the optimal strategy retries exactly `⌊mu/4⌋` times,
/// so its memory grows linearly with the budget. Requires `mu ∈ {13 + 4k}`;
/// the expectation threshold is set to force the full number of retries.
pub fn gen_sp_family(mu: u64) -> Result<BwcInstance, GenError> {
    if mu < 13 || mu % 4 != 1 {
        return Err(GenError::BadParameter(format!(
            "fig7 needs a budget of the form 13 + 4k, got {mu}"
        )));
    }
    let half = (mu / 2) as i64;
    let mut gb = GameBuilder::new("fig7");
    for (name, owner) in [("s1", Owner::P1), ("s2", Owner::P2), ("s3", Owner::P1)] {
        gb.state(name, owner).unwrap();
    }
    for (src, dst, w) in [
        ("s1", "s2", 1),
        ("s1", "s3", half),
        ("s2", "s3", 1),
        ("s2", "s1", 1),
        ("s3", "s3", 1),
    ] {
        gb.edge(src, dst, w).unwrap();
    }
    gb.init("s1").unwrap();
    gb.target("s3").unwrap();
    let game = gb.finish().unwrap();
    let model =
        memoryless_model(&game, "coin", &[("s2", &[("s3", r(1, 2)), ("s1", r(1, 2))])]);
    let tries = (mu / 4) as u32;
    let nu = sp_family_expected_cost(mu, tries - 1);
    let targets = game.targets().clone();
    Ok(BwcInstance::new(
        game,
        model,
        Rational::new(mu as i64, 1),
        nu,
        Objective::ShortestPath(targets),
    )
    .expect("family member is valid"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use core_model::{validate_machine, Owner};
    use std::collections::BTreeSet;

    fn weight_set(game: &GameGraph) -> BTreeSet<i64> {
        game.state_ids().flat_map(|s| game.succ(s).iter().map(|&(_, w)| w)).collect()
    }

    #[test]
    fn commute_game_shape() {
        let inst = fig1();
        assert_eq!(inst.game.n_states(), 7);
        assert_eq!(weight_set(&inst.game), BTreeSet::from([1, 2, 3, 15, 20, 35, 45]));
        assert_eq!(inst.mu, r(60, 1));
        assert_eq!(inst.nu, r(38, 1));
        let work = inst.game.state_id("work").unwrap();
        assert_eq!(inst.game.targets(), &BTreeSet::from([work]));
        // Split hops preserve the drawn durations 30 and 70.
        let traffic = inst.game.state_id("traffic").unwrap();
        let medium = inst.game.state_id("medium").unwrap();
        let heavy = inst.game.state_id("heavy").unwrap();
        assert_eq!(
            inst.game.edge_weight(traffic, medium).unwrap()
                + inst.game.edge_weight(medium, work).unwrap(),
            30
        );
        assert_eq!(
            inst.game.edge_weight(traffic, heavy).unwrap()
                + inst.game.edge_weight(heavy, work).unwrap(),
            70
        );
    }

    #[test]
    fn commute_model_probabilities() {
        let inst = fig1();
        let m0 = inst.model.initial_memory();
        let station = inst.game.state_id("station").unwrap();
        let d = inst.model.output(m0, station).unwrap();
        assert_eq!(d.prob(inst.game.state_id("waiting").unwrap()), r(1, 10));
        assert_eq!(d.prob(inst.game.state_id("work").unwrap()), r(9, 10));
        let traffic = inst.game.state_id("traffic").unwrap();
        let d = inst.model.output(m0, traffic).unwrap();
        assert_eq!(d.prob(inst.game.state_id("medium").unwrap()), r(7, 10));
        assert_eq!(d.prob(inst.game.state_id("heavy").unwrap()), r(1, 10));
    }

    #[test]
    fn commute_reference_strategy_is_total() {
        let inst = fig1();
        let strat = fig1_reference_strategy(&inst.game);
        assert_eq!(strat.mem_count(), 4);
        assert!(validate_machine(&inst.game, &strat, Owner::P1).is_empty());
    }

    #[test]
    fn running_example_shape_and_model() {
        let inst = fig2();
        assert_eq!(inst.game.n_states(), 14);
        assert_eq!(inst.mu, r(0, 1));
        assert_eq!(inst.nu, r(3, 2));
        let m0 = inst.model.initial_memory();
        let id = |n: &str| inst.game.state_id(n).unwrap();
        let at_s7 = inst.model.output(m0, id("s7")).unwrap();
        assert_eq!(at_s7.prob(id("s6")), r(1, 1));
        assert_eq!(at_s7.prob(id("s6t")), r(0, 1));
        // The zero-probability copy is in the game but outside the model's support.
        assert_eq!(at_s7.support().collect::<Vec<_>>(), vec![id("s6")]);
        for p2 in ["s2", "s4", "s5", "s8", "s11"] {
            let d = inst.model.output(m0, id(p2)).unwrap();
            for (_, p) in d.entries() {
                assert_eq!(*p, r(1, 2), "non-degenerate rows are fair coin flips");
            }
        }
    }

    #[test]
    fn twins_copy_their_base_state() {
        let inst = fig2();
        let g = &inst.game;
        for (twin, base) in [("s3t", "s3"), ("s6t", "s6"), ("s10t", "s10")] {
            let t = g.state_id(twin).unwrap();
            let b = g.state_id(base).unwrap();
            assert_eq!(g.owner(t), g.owner(b));
            assert_eq!(g.succ(t), g.succ(b), "twin {twin} must copy {base}");
        }
    }

    #[test]
    fn mwec_example_shape() {
        let inst = fig3();
        assert_eq!(inst.game.n_states(), 5);
        let p2: Vec<_> = inst
            .game
            .state_ids()
            .filter(|&s| inst.game.owner(s) == Owner::P2)
            .map(|s| inst.game.state_name(s).to_string())
            .collect();
        assert_eq!(p2, vec!["s3"]);
        assert_eq!(weight_set(&inst.game), BTreeSet::from([-1, 0, 1, 10]));
    }

    #[test]
    fn infinite_memory_example_shape() {
        let inst = fig5();
        assert_eq!(inst.game.n_states(), 4);
        assert_eq!(inst.mu, r(-3, 2));
        assert_eq!(inst.nu, r(-5, 4));
        assert_eq!(weight_set(&inst.game), BTreeSet::from([-4, -1, 0, 4]));
    }

    #[test]
    fn compensation_family_weights() {
        let ten = gen_fig6(10).unwrap();
        assert_eq!(weight_set(&ten.game), BTreeSet::from([1, 0, -10, 15]));
        assert_eq!(ten.nu, r(11, 10));
        let one = gen_fig6(1).unwrap();
        assert_eq!(one.game.max_abs_weight(), 6);
        assert!(matches!(gen_fig6(0), Err(GenError::BadParameter(_))));
    }

    #[test]
    fn retry_family_direct_edge_and_threshold() {
        let inst = gen_sp_family(13).unwrap();
        let id = |n: &str| inst.game.state_id(n).unwrap();
        assert_eq!(inst.game.edge_weight(id("s1"), id("s3")), Some(6));
        assert_eq!(inst.nu, r(9, 2));
        let seventeen = gen_sp_family(17).unwrap();
        let id17 = |n: &str| seventeen.game.state_id(n).unwrap();
        assert_eq!(seventeen.game.edge_weight(id17("s1"), id17("s3")), Some(8));
        assert!(matches!(gen_sp_family(14), Err(GenError::BadParameter(_))));
        assert!(matches!(gen_sp_family(9), Err(GenError::BadParameter(_))));
    }

    #[test]
    fn retry_family_expected_costs_decrease() {
        assert_eq!(sp_family_expected_cost(13, 0), r(6, 1));
        assert_eq!(sp_family_expected_cost(13, 2), r(9, 2));
        assert_eq!(sp_family_expected_cost(13, 3), r(17, 4));
        for mu in [13u64, 17, 21] {
            let tries = (mu / 4) as u32;
            for n in 1..=tries {
                assert!(
                    sp_family_expected_cost(mu, n) < sp_family_expected_cost(mu, n - 1),
                    "one more retry must strictly lower the expected cost"
                );
            }
        }
    }

    #[test]
    fn builtin_dispatch() {
        assert!(builtin("fig1").is_ok());
        assert!(builtin("fig6(10)").is_ok());
        assert!(builtin("fig7(13)").is_ok());
        assert!(matches!(builtin("fig6"), Err(GenError::BadParameter(_))));
        assert!(matches!(builtin("fig6(zero)"), Err(GenError::BadParameter(_))));
        assert!(matches!(builtin("fig4"), Err(GenError::UnknownBuiltin(_))));
    }
}
