//! Exact mean-payoff verification of a finite-memory strategy.

use crate::karp::min_mean_cycle;
use crate::report::VerificationReport;
use core_model::{
    fix_both, validate_machine, ExtRational, GameGraph, MemId, MooreMachine, Owner, Rational,
    StateId,
};
use mdp_analysis::mc_expected_mp;
use std::collections::{BTreeMap, VecDeque};

/// Reachable product of the game with the strategy's memory. Player-1 moves
/// range over the strategy's output support (any consistent outcome counts
/// against the worst case), player-2 moves over every game edge.
pub(crate) struct StrategyProduct {
    pub adj: Vec<Vec<(usize, i64)>>,
    pub pairs: Vec<(StateId, MemId)>,
    pub names: Vec<String>,
}

pub(crate) fn strategy_product(game: &GameGraph, strategy: &MooreMachine) -> StrategyProduct {
    let plain = strategy.is_memoryless();
    let name = |s: StateId, m: MemId| {
        if plain {
            game.state_name(s).to_string()
        } else {
            format!("{}.{}", game.state_name(s), strategy.mem_name(m))
        }
    };
    let start = (game.initial(), strategy.initial_memory());
    let mut ids: BTreeMap<(StateId, MemId), usize> = BTreeMap::from([(start, 0)]);
    let mut pairs = vec![start];
    let mut names = vec![name(start.0, start.1)];
    let mut adj: Vec<Vec<(usize, i64)>> = Vec::new();
    let mut queue = VecDeque::from([start]);
    while let Some((s, m)) = queue.pop_front() {
        let m2 = strategy
            .update(m, s)
            .expect("strategy has an update row for every reachable pair");
        let moves: Vec<StateId> = match game.owner(s) {
            Owner::P1 => strategy
                .output(m, s)
                .expect("strategy has an output row for every reachable player-1 pair")
                .support()
                .collect(),
            Owner::P2 => game.succ(s).iter().map(|&(t, _)| t).collect(),
        };
        let mut row = Vec::with_capacity(moves.len());
        for t in moves {
            let w = game.edge_weight(s, t).expect("support stays within successors");
            let next = ids.len();
            let id = *ids.entry((t, m2)).or_insert_with(|| {
                pairs.push((t, m2));
                names.push(name(t, m2));
                queue.push_back((t, m2));
                next
            });
            row.push((id, w));
        }
        adj.push(row);
    }
    StrategyProduct { adj, pairs, names }
}

/// Verifies a finite-memory strategy for mean payoff: the worst case is the
/// minimum mean cycle of the strategy product (every adversary move stays
/// available), the expectation is the exact mean payoff of the chain induced
/// with the stochastic model. Both comparisons are strict.
pub fn verify_mp(
    game: &GameGraph,
    strategy: &MooreMachine,
    model: &MooreMachine,
    mu: &Rational,
    nu: &Rational,
) -> VerificationReport {
    assert!(
        validate_machine(game, strategy, Owner::P1).is_empty(),
        "strategy must be a valid total player-1 machine"
    );
    assert!(
        validate_machine(game, model, Owner::P2).is_empty(),
        "model must be a valid total player-2 machine"
    );
    let product = strategy_product(game, strategy);
    let worst =
        min_mean_cycle(&product.adj).expect("deadlock-free games always admit a cycle");
    let fixed = fix_both(game, strategy, model).expect("both machines are total");
    let expectation = mc_expected_mp(&fixed.chain, fixed.chain.graph().initial());
    VerificationReport {
        objective: "mp",
        pass_worst_case: worst > *mu,
        pass_expectation: expectation > *nu,
        worst_case: ExtRational::Finite(worst),
        expectation: ExtRational::Finite(expectation),
        product_states: product.adj.len(),
        chain_states: fixed.chain.graph().n_states(),
        cycle: None,
    }
}
