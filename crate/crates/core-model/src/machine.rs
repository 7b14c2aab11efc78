//! Stochastic Moore machines: finite-memory strategy representations.
//!
//! A machine has a finite memory set, a deterministic total update function
//! on (memory, state) pairs, and a per-(memory, state) output distribution
//! over successor states. The same type represents both the adversary's
//! stochastic model and synthesized controller strategies; which player's
//! states need outputs depends on the role.
//!
//! Update semantics: the memory is updated when the play *leaves* a state, so
//! the new memory depends on the left state only, not on the edge taken. The
//! distribution used at state `s` after history `ρ` is `output(û(m0, ρ), s)`.
//!
//! Unreachable (memory, state) pairs may be absent from the maps; validation
//! only requires totality over pairs reachable under the machine's own play.

use crate::graph::{GameGraph, Owner, StateId};
use crate::rational::Rational;
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

/// Dense index of a memory element in declaration order.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct MemId(pub u32);

impl MemId {
    pub fn idx(self) -> usize {
        self.0 as usize
    }
}

/// A rational distribution over states. Entries follow declaration order and
/// may carry probability zero; the support excludes them.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Distribution(pub Vec<(StateId, Rational)>);

impl Distribution {
    pub fn dirac(s: StateId) -> Self {
        Distribution(vec![(s, Rational::one())])
    }

    pub fn uniform(states: &[StateId]) -> Self {
        let p = Rational::new(1, states.len() as i64);
        Distribution(states.iter().map(|&s| (s, p.clone())).collect())
    }

    pub fn sum(&self) -> Rational {
        self.0.iter().map(|(_, p)| p.clone()).sum()
    }

    /// States with strictly positive probability.
    pub fn support(&self) -> impl Iterator<Item = StateId> + '_ {
        self.0.iter().filter(|(_, p)| p.is_positive()).map(|&(s, _)| s)
    }

    pub fn prob(&self, s: StateId) -> Rational {
        self.0
            .iter()
            .filter(|&&(t, _)| t == s)
            .map(|(_, p)| p.clone())
            .sum()
    }

    pub fn entries(&self) -> &[(StateId, Rational)] {
        &self.0
    }
}

/// A finite-state stochastic Moore machine.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MooreMachine {
    name: String,
    memories: Vec<String>,
    by_name: BTreeMap<String, MemId>,
    initial: MemId,
    update: BTreeMap<(MemId, StateId), MemId>,
    output: BTreeMap<(MemId, StateId), Distribution>,
}

#[derive(Clone, PartialEq, Eq, Debug, thiserror::Error)]
pub enum MachineBuildError {
    #[error("duplicate memory `{0}`")]
    DuplicateMemory(String),
    #[error("unknown memory `{0}`")]
    UnknownMemory(String),
    #[error("missing initial memory")]
    MissingInitial,
    #[error("conflicting update row for ({0}, {1})")]
    ConflictingUpdate(String, String),
    #[error("machine has no memory elements")]
    Empty,
}

/// Incremental constructor for [`MooreMachine`].
#[derive(Clone, Debug)]
pub struct MachineBuilder {
    name: String,
    memories: Vec<String>,
    by_name: BTreeMap<String, MemId>,
    initial: Option<MemId>,
    update: BTreeMap<(MemId, StateId), MemId>,
    output: BTreeMap<(MemId, StateId), Distribution>,
}

impl MachineBuilder {
    pub fn new(name: &str) -> Self {
        MachineBuilder {
            name: name.to_string(),
            memories: Vec::new(),
            by_name: BTreeMap::new(),
            initial: None,
            update: BTreeMap::new(),
            output: BTreeMap::new(),
        }
    }

    pub fn memory(&mut self, name: &str) -> Result<MemId, MachineBuildError> {
        if self.by_name.contains_key(name) {
            return Err(MachineBuildError::DuplicateMemory(name.to_string()));
        }
        let id = MemId(self.memories.len() as u32);
        self.memories.push(name.to_string());
        self.by_name.insert(name.to_string(), id);
        Ok(id)
    }

    pub fn lookup(&self, name: &str) -> Result<MemId, MachineBuildError> {
        self.by_name
            .get(name)
            .copied()
            .ok_or_else(|| MachineBuildError::UnknownMemory(name.to_string()))
    }

    pub fn init(&mut self, name: &str) -> Result<(), MachineBuildError> {
        self.initial = Some(self.lookup(name)?);
        Ok(())
    }

    pub fn init_id(&mut self, id: MemId) {
        self.initial = Some(id);
    }

    /// Adds an update row; rejects a second, different row for the same pair.
    pub fn update_row(
        &mut self,
        mem: MemId,
        state: StateId,
        next: MemId,
        names: impl Fn() -> (String, String),
    ) -> Result<(), MachineBuildError> {
        match self.update.insert((mem, state), next) {
            Some(prev) if prev != next => {
                let (m, s) = names();
                Err(MachineBuildError::ConflictingUpdate(m, s))
            }
            _ => Ok(()),
        }
    }

    pub fn update_id(&mut self, mem: MemId, state: StateId, next: MemId) {
        self.update.insert((mem, state), next);
    }

    /// Appends one entry to the output distribution of (mem, state).
    pub fn output_entry(&mut self, mem: MemId, state: StateId, dst: StateId, p: Rational) {
        self.output
            .entry((mem, state))
            .or_insert_with(|| Distribution(Vec::new()))
            .0
            .push((dst, p));
    }

    pub fn output_dist(&mut self, mem: MemId, state: StateId, dist: Distribution) {
        self.output.insert((mem, state), dist);
    }

    pub fn finish(self) -> Result<MooreMachine, MachineBuildError> {
        if self.memories.is_empty() {
            return Err(MachineBuildError::Empty);
        }
        let initial = self.initial.ok_or(MachineBuildError::MissingInitial)?;
        Ok(MooreMachine {
            name: self.name,
            memories: self.memories,
            by_name: self.by_name,
            initial,
            update: self.update,
            output: self.output,
        })
    }
}

impl MooreMachine {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn mem_count(&self) -> usize {
        self.memories.len()
    }

    pub fn mem_ids(&self) -> impl Iterator<Item = MemId> + '_ {
        (0..self.memories.len() as u32).map(MemId)
    }

    pub fn mem_name(&self, id: MemId) -> &str {
        &self.memories[id.idx()]
    }

    pub fn mem_id(&self, name: &str) -> Option<MemId> {
        self.by_name.get(name).copied()
    }

    pub fn initial_memory(&self) -> MemId {
        self.initial
    }

    pub fn is_memoryless(&self) -> bool {
        self.memories.len() == 1
    }

    pub fn update(&self, mem: MemId, state: StateId) -> Option<MemId> {
        self.update.get(&(mem, state)).copied()
    }

    pub fn output(&self, mem: MemId, state: StateId) -> Option<&Distribution> {
        self.output.get(&(mem, state))
    }

    pub fn update_rows(&self) -> impl Iterator<Item = (MemId, StateId, MemId)> + '_ {
        self.update.iter().map(|(&(m, s), &n)| (m, s, n))
    }

    pub fn output_rows(&self) -> impl Iterator<Item = (MemId, StateId, &Distribution)> + '_ {
        self.output.iter().map(|(&(m, s), d)| (m, s, d))
    }

    /// Memory after reading the state sequence `states` from the initial memory.
    /// Returns `None` if an update row is missing along the way.
    pub fn run(&self, states: impl IntoIterator<Item = StateId>) -> Option<MemId> {
        let mut m = self.initial;
        for s in states {
            m = self.update(m, s)?;
        }
        Some(m)
    }
}

/// Diagnostics from validating a machine against a game for one role.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum MachineViolation {
    /// No update row for a reachable (memory, state) pair.
    MissingUpdate(String, String),
    /// No output distribution for a reachable (memory, state) pair owned by the role.
    MissingOutput(String, String),
    /// Output distribution does not sum to exactly 1.
    BadSum(String, String, Rational),
    /// Output support contains a non-successor of the state.
    SupportOutsideSuccessors(String, String, String),
}

impl fmt::Display for MachineViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MachineViolation::MissingUpdate(m, s) => {
                write!(f, "missing update row for memory {m} at state {s}")
            }
            MachineViolation::MissingOutput(m, s) => {
                write!(f, "missing output distribution for memory {m} at state {s}")
            }
            MachineViolation::BadSum(m, s, sum) => {
                write!(f, "distribution at memory {m}, state {s} sums to {sum}, expected 1")
            }
            MachineViolation::SupportOutsideSuccessors(m, s, t) => {
                write!(f, "distribution at memory {m}, state {s} mentions non-successor {t}")
            }
        }
    }
}

/// Validates `machine` as the strategy of `role` on `game`: totality of
/// update/output over the (memory, state) pairs reachable when the role
/// follows the machine and the opponent plays arbitrarily, exact sum-1
/// distributions, and supports within successor sets.
pub fn validate_machine(
    game: &GameGraph,
    machine: &MooreMachine,
    role: Owner,
) -> Vec<MachineViolation> {
    let mut out = Vec::new();
    // Distribution checks apply to every declared output row, reachable or not.
    for (m, s, dist) in machine.output_rows() {
        let sum = dist.sum();
        if sum != Rational::one() {
            out.push(MachineViolation::BadSum(
                machine.mem_name(m).to_string(),
                game.state_name(s).to_string(),
                sum,
            ));
        }
        for (t, _) in dist.entries() {
            if game.edge_weight(s, *t).is_none() {
                out.push(MachineViolation::SupportOutsideSuccessors(
                    machine.mem_name(m).to_string(),
                    game.state_name(s).to_string(),
                    game.state_name(*t).to_string(),
                ));
            }
        }
    }
    // Totality over reachable pairs.
    let mut seen: BTreeSet<(MemId, StateId)> = BTreeSet::new();
    let start = (machine.initial_memory(), game.initial());
    let mut queue = VecDeque::from([start]);
    seen.insert(start);
    while let Some((m, s)) = queue.pop_front() {
        let next_mem = match machine.update(m, s) {
            Some(n) => n,
            None => {
                out.push(MachineViolation::MissingUpdate(
                    machine.mem_name(m).to_string(),
                    game.state_name(s).to_string(),
                ));
                continue;
            }
        };
        let succs: Vec<StateId> = if game.owner(s) == role {
            match machine.output(m, s) {
                Some(d) => d.support().collect(),
                None => {
                    out.push(MachineViolation::MissingOutput(
                        machine.mem_name(m).to_string(),
                        game.state_name(s).to_string(),
                    ));
                    continue;
                }
            }
        } else {
            game.succ(s).iter().map(|&(t, _)| t).collect()
        };
        for t in succs {
            let pair = (next_mem, t);
            if seen.insert(pair) {
                queue.push_back(pair);
            }
        }
    }
    out
}

/// A pure memoryless strategy: one chosen successor per covered state.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct PureStrategy {
    pub choice: BTreeMap<StateId, StateId>,
}

impl PureStrategy {
    pub fn new() -> Self {
        PureStrategy { choice: BTreeMap::new() }
    }

    pub fn get(&self, s: StateId) -> Option<StateId> {
        self.choice.get(&s).copied()
    }

    /// Wraps the strategy as a single-memory Moore machine on `game`.
    /// The update map is total; outputs are Dirac on the covered states.
    pub fn to_machine(&self, game: &GameGraph, name: &str) -> MooreMachine {
        let mut b = MachineBuilder::new(name);
        let m0 = b.memory("m0").expect("fresh builder");
        b.init_id(m0);
        for s in game.state_ids() {
            b.update_id(m0, s, m0);
        }
        for (&s, &t) in &self.choice {
            b.output_dist(m0, s, Distribution::dirac(t));
        }
        b.finish().expect("single memory")
    }
}
