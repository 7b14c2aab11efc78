//! Product and fixing constructions between games, machines, MDPs and chains.
//!
//! All constructions explore reachable combinations only (unreachable
//! (memory, state) pairs are pruned) and preserve state names, weights and
//! declaration order so that results map back to the original game by name.

use crate::graph::{GameBuilder, GameGraph, Owner, StateId};
use crate::machine::{Distribution, MachineBuilder, MemId, MooreMachine};
use crate::mdp::{FixError, MarkovChain, Mdp};
use crate::rational::Rational;
use num_bigint::BigInt;
use std::collections::{BTreeMap, VecDeque};

#[derive(Clone, PartialEq, Eq, Debug, thiserror::Error)]
pub enum ProductError {
    #[error("no update row for reachable pair (memory {0}, state {1})")]
    MissingUpdate(String, String),
    #[error("no output distribution for reachable pair (memory {0}, state {1})")]
    MissingOutput(String, String),
}

/// Result of [`product_with_machine`]: the expanded game over reachable
/// (state, memory) pairs, the memoryless transcription of the machine on it,
/// and the pair behind each product state.
#[derive(Clone, Debug)]
pub struct Product {
    pub game: GameGraph,
    pub transcription: MooreMachine,
    /// Product state id (by index) → (original state, machine memory).
    pub pairs: Vec<(StateId, MemId)>,
    /// (original state, machine memory) → product state id.
    pub pair_id: BTreeMap<(StateId, MemId), StateId>,
}

/// Expands `game` with the memory of a player-2 `machine`: states become the
/// reachable (state, memory) pairs, every game edge is kept (the worst case
/// still ranges over all player-2 moves), and the machine becomes a
/// memoryless model on the product. Outcomes are in weight-preserving
/// bijection with the original, so values of fixed strategies are unchanged.
pub fn product_with_machine(
    game: &GameGraph,
    machine: &MooreMachine,
) -> Result<Product, ProductError> {
    let memoryless = machine.is_memoryless();
    let name = |s: StateId, m: MemId| {
        if memoryless {
            game.state_name(s).to_string()
        } else {
            format!("{}.{}", game.state_name(s), machine.mem_name(m))
        }
    };

    let mut b = GameBuilder::new(game.name());
    let mut pairs: Vec<(StateId, MemId)> = Vec::new();
    let mut pair_id: BTreeMap<(StateId, MemId), StateId> = BTreeMap::new();
    let start = (game.initial(), machine.initial_memory());
    let sid = b.state(&name(start.0, start.1), game.owner(start.0)).expect("fresh");
    pairs.push(start);
    pair_id.insert(start, sid);
    let mut queue = VecDeque::from([start]);

    // First pass: discover reachable pairs and allocate product states.
    let mut next_mem: BTreeMap<(StateId, MemId), MemId> = BTreeMap::new();
    while let Some((s, m)) = queue.pop_front() {
        let m2 = machine.update(m, s).ok_or_else(|| {
            ProductError::MissingUpdate(
                machine.mem_name(m).to_string(),
                game.state_name(s).to_string(),
            )
        })?;
        next_mem.insert((s, m), m2);
        if game.owner(s) == Owner::P2 && machine.output(m, s).is_none() {
            return Err(ProductError::MissingOutput(
                machine.mem_name(m).to_string(),
                game.state_name(s).to_string(),
            ));
        }
        for &(t, _) in game.succ(s) {
            let pair = (t, m2);
            if !pair_id.contains_key(&pair) {
                let id = b.state(&name(t, m2), game.owner(t)).expect("pair names unique");
                pairs.push(pair);
                pair_id.insert(pair, id);
                queue.push_back(pair);
            }
        }
    }

    // Second pass: edges, targets, initial.
    for (idx, &(s, m)) in pairs.iter().enumerate() {
        let here = StateId(idx as u32);
        let m2 = next_mem[&(s, m)];
        for &(t, w) in game.succ(s) {
            b.edge_ids(here, pair_id[&(t, m2)], w);
        }
        if game.is_target(s) {
            b.target_id(here);
        }
    }
    b.init_id(pair_id[&start]);
    let product_game = b.finish().expect("initial allocated first");

    // Memoryless transcription of the machine on the product.
    let mut mb = MachineBuilder::new(machine.name());
    let m0 = mb.memory("m0").expect("fresh");
    mb.init_id(m0);
    for (idx, &(s, m)) in pairs.iter().enumerate() {
        let here = StateId(idx as u32);
        mb.update_id(m0, here, m0);
        if game.owner(s) == Owner::P2 {
            let m2 = next_mem[&(s, m)];
            let dist = machine.output(m, s).expect("checked in first pass");
            let entries = dist
                .entries()
                .iter()
                .map(|(t, p)| (pair_id[&(*t, m2)], p.clone()))
                .collect();
            mb.output_dist(m0, here, Distribution(entries));
        }
    }
    let transcription = mb.finish().expect("single memory");

    Ok(Product { game: product_game, transcription, pairs, pair_id })
}

/// Fixes a memoryless player-2 model into the game, yielding an MDP on the
/// same graph.
pub fn fix_player2(game: &GameGraph, model: &MooreMachine) -> Result<Mdp, FixError> {
    if !model.is_memoryless() {
        return Err(FixError::NotMemoryless(model.mem_count()));
    }
    let m0 = model.initial_memory();
    let mut delta = BTreeMap::new();
    for s in game.state_ids() {
        if game.owner(s) == Owner::P2 {
            if let Some(d) = model.output(m0, s) {
                delta.insert(s, d.clone());
            }
        }
    }
    Mdp::new(game.clone(), delta)
}

/// Result of [`fix_both`]: the chain and the (state, memory1, memory2) triple
/// behind each chain state.
#[derive(Clone, Debug)]
pub struct FixedChain {
    pub chain: MarkovChain,
    pub origin: Vec<(StateId, MemId, MemId)>,
}

/// Fixes both players' machines, yielding the finite Markov chain over
/// reachable (state, memory1, memory2) triples. Only strictly positive
/// probability moves are expanded; the chain's traces projected to states are
/// exactly the game outcomes consistent with both machines.
pub fn fix_both(
    game: &GameGraph,
    strategy1: &MooreMachine,
    strategy2: &MooreMachine,
) -> Result<FixedChain, ProductError> {
    let plain = strategy1.is_memoryless() && strategy2.is_memoryless();
    let name = |s: StateId, m1: MemId, m2: MemId| {
        if plain {
            game.state_name(s).to_string()
        } else {
            format!(
                "{}.{}.{}",
                game.state_name(s),
                strategy1.mem_name(m1),
                strategy2.mem_name(m2)
            )
        }
    };

    type Triple = (StateId, MemId, MemId);
    let start: Triple = (game.initial(), strategy1.initial_memory(), strategy2.initial_memory());
    let mut b = GameBuilder::new(game.name());
    let mut ids: BTreeMap<Triple, StateId> = BTreeMap::new();
    let mut origin: Vec<Triple> = Vec::new();
    let first = b.state(&name(start.0, start.1, start.2), game.owner(start.0)).expect("fresh");
    ids.insert(start, first);
    origin.push(start);
    let mut queue = VecDeque::from([start]);
    let mut moves: BTreeMap<Triple, Vec<(Triple, Rational, i64)>> = BTreeMap::new();

    while let Some((s, m1, m2)) = queue.pop_front() {
        let (mover, mem) = match game.owner(s) {
            Owner::P1 => (strategy1, m1),
            Owner::P2 => (strategy2, m2),
        };
        let dist = mover.output(mem, s).ok_or_else(|| {
            ProductError::MissingOutput(
                mover.mem_name(mem).to_string(),
                game.state_name(s).to_string(),
            )
        })?;
        let n1 = strategy1.update(m1, s).ok_or_else(|| {
            ProductError::MissingUpdate(
                strategy1.mem_name(m1).to_string(),
                game.state_name(s).to_string(),
            )
        })?;
        let n2 = strategy2.update(m2, s).ok_or_else(|| {
            ProductError::MissingUpdate(
                strategy2.mem_name(m2).to_string(),
                game.state_name(s).to_string(),
            )
        })?;
        // Merge duplicate targets, keep declaration order, drop zero entries.
        let mut seen_targets: Vec<StateId> = Vec::new();
        for (t, _) in dist.entries() {
            if !seen_targets.contains(t) {
                seen_targets.push(*t);
            }
        }
        let mut out = Vec::new();
        for t in seen_targets {
            let p = dist.prob(t);
            if !p.is_positive() {
                continue;
            }
            let w = game.edge_weight(s, t).expect("support within successors");
            let triple = (t, n1, n2);
            if !ids.contains_key(&triple) {
                let id = b.state(&name(t, n1, n2), game.owner(t)).expect("triple names unique");
                ids.insert(triple, id);
                origin.push(triple);
                queue.push_back(triple);
            }
            out.push((triple, p, w));
        }
        moves.insert((s, m1, m2), out);
    }

    let mut delta: BTreeMap<StateId, Distribution> = BTreeMap::new();
    for (triple, out) in &moves {
        let here = ids[triple];
        let mut entries = Vec::new();
        for (next, p, w) in out {
            b.edge_ids(here, ids[next], *w);
            entries.push((ids[next], p.clone()));
        }
        delta.insert(here, Distribution(entries));
    }
    for (triple, &id) in &ids {
        if game.is_target(triple.0) {
            b.target_id(id);
        }
    }
    b.init_id(first);
    let graph = b.finish().expect("initial allocated first");
    let chain = MarkovChain::new(graph, delta).expect("sum-1 by construction");
    Ok(FixedChain { chain, origin })
}

/// Shifts mean-payoff thresholds to zero: with `mu = a/b` (reduced, `b > 0`)
/// every weight becomes `b·w − a` and the expectation threshold `nu` becomes
/// `b·nu − a`. A play has mean payoff > `mu` in the original game iff it has
/// mean payoff > 0 in the transformed one.
pub fn transform_weights_mp(game: &GameGraph, mu: &Rational, nu: &Rational) -> (GameGraph, Rational) {
    let a = mu.numer().clone();
    let b = mu.denom().clone();
    let to_i64 = |x: &BigInt| -> i64 {
        i64::try_from(x).expect("transformed weight exceeds i64 range")
    };
    let (ai, bi) = (to_i64(&a), to_i64(&b));
    let mut gb = GameBuilder::new(game.name());
    for s in game.state_ids() {
        gb.state(game.state_name(s), game.owner(s)).expect("unique names");
    }
    for s in game.state_ids() {
        for &(t, w) in game.succ(s) {
            let w2 = bi
                .checked_mul(w)
                .and_then(|x| x.checked_sub(ai))
                .expect("transformed weight exceeds i64 range");
            gb.edge_ids(s, t, w2);
        }
        if game.is_target(s) {
            gb.target_id(s);
        }
    }
    gb.init_id(game.initial());
    let nu2 = &Rational::from_big(b, BigInt::from(1)) * nu - Rational::from_big(a, BigInt::from(1));
    (gb.finish().expect("initial present"), nu2)
}
