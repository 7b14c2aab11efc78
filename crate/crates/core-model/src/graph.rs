//! Weighted two-player game graphs.
//!
//! A `GameGraph` is a finite directed graph with integer edge weights, a
//! per-state owner tag (player 1 or player 2), a designated initial state and
//! an optional target set (used by shortest-path objectives). State
//! identifiers are interned: the string name maps to a dense index assigned in
//! declaration order, and every iteration in the workspace follows that order,
//! which makes tie-breaking and serialized output reproducible.
//!
//! Structural invariants (non-blocking, at most one edge per ordered state
//! pair) are checked by [`validate`], not by construction: parsers and
//! generators build first, then report all violations with context.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

/// Dense index of a state in declaration order.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct StateId(pub u32);

impl StateId {
    pub fn idx(self) -> usize {
        self.0 as usize
    }
}

/// Which player controls a state.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Owner {
    P1,
    P2,
}

impl fmt::Display for Owner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Owner::P1 => write!(f, "p1"),
            Owner::P2 => write!(f, "p2"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
struct StateData {
    name: String,
    owner: Owner,
}

/// A finite weighted game graph.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GameGraph {
    name: String,
    states: Vec<StateData>,
    by_name: BTreeMap<String, StateId>,
    /// Outgoing edges per state, in declaration order.
    succs: Vec<Vec<(StateId, i64)>>,
    initial: StateId,
    targets: BTreeSet<StateId>,
}

/// A structural violation reported by [`validate`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Violation {
    /// State has no outgoing edge.
    Deadlock(String),
    /// More than one edge between the same ordered state pair.
    DuplicateEdge(String, String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Deadlock(s) => write!(f, "deadlock at {s}: no outgoing edge"),
            Violation::DuplicateEdge(a, b) => write!(f, "duplicate edge {a} -> {b}"),
        }
    }
}

/// Errors that make a graph unrepresentable (as opposed to invalid-but-representable).
#[derive(Clone, PartialEq, Eq, Debug, thiserror::Error)]
pub enum BuildError {
    #[error("duplicate state `{0}`")]
    DuplicateState(String),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("missing initial state")]
    MissingInitial,
}

/// Incremental constructor for [`GameGraph`].
#[derive(Clone, Debug)]
pub struct GameBuilder {
    name: String,
    states: Vec<StateData>,
    by_name: BTreeMap<String, StateId>,
    succs: Vec<Vec<(StateId, i64)>>,
    initial: Option<StateId>,
    targets: BTreeSet<StateId>,
}

impl GameBuilder {
    pub fn new(name: &str) -> Self {
        GameBuilder {
            name: name.to_string(),
            states: Vec::new(),
            by_name: BTreeMap::new(),
            succs: Vec::new(),
            initial: None,
            targets: BTreeSet::new(),
        }
    }

    /// Declares a state; declaration order fixes its dense index.
    pub fn state(&mut self, name: &str, owner: Owner) -> Result<StateId, BuildError> {
        if self.by_name.contains_key(name) {
            return Err(BuildError::DuplicateState(name.to_string()));
        }
        let id = StateId(self.states.len() as u32);
        self.states.push(StateData { name: name.to_string(), owner });
        self.by_name.insert(name.to_string(), id);
        self.succs.push(Vec::new());
        Ok(id)
    }

    pub fn lookup(&self, name: &str) -> Result<StateId, BuildError> {
        self.by_name
            .get(name)
            .copied()
            .ok_or_else(|| BuildError::UnknownState(name.to_string()))
    }

    pub fn edge_ids(&mut self, src: StateId, dst: StateId, weight: i64) {
        self.succs[src.idx()].push((dst, weight));
    }

    pub fn edge(&mut self, src: &str, dst: &str, weight: i64) -> Result<(), BuildError> {
        let s = self.lookup(src)?;
        let d = self.lookup(dst)?;
        self.edge_ids(s, d, weight);
        Ok(())
    }

    /// True iff the ordered pair already has an edge.
    pub fn has_edge(&self, src: &str, dst: &str) -> bool {
        match (self.by_name.get(src), self.by_name.get(dst)) {
            (Some(&s), Some(&d)) => self.succs[s.idx()].iter().any(|&(t, _)| t == d),
            _ => false,
        }
    }

    pub fn init(&mut self, name: &str) -> Result<(), BuildError> {
        self.initial = Some(self.lookup(name)?);
        Ok(())
    }

    pub fn init_id(&mut self, id: StateId) {
        self.initial = Some(id);
    }

    pub fn target(&mut self, name: &str) -> Result<(), BuildError> {
        let id = self.lookup(name)?;
        self.targets.insert(id);
        Ok(())
    }

    pub fn target_id(&mut self, id: StateId) {
        self.targets.insert(id);
    }

    pub fn finish(self) -> Result<GameGraph, BuildError> {
        let initial = self.initial.ok_or(BuildError::MissingInitial)?;
        Ok(GameGraph {
            name: self.name,
            states: self.states,
            by_name: self.by_name,
            succs: self.succs,
            initial,
            targets: self.targets,
        })
    }
}

impl GameGraph {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n_states(&self) -> usize {
        self.states.len()
    }

    pub fn state_ids(&self) -> impl Iterator<Item = StateId> + '_ {
        (0..self.states.len() as u32).map(StateId)
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.by_name.get(name).copied()
    }

    pub fn state_name(&self, id: StateId) -> &str {
        &self.states[id.idx()].name
    }

    pub fn owner(&self, id: StateId) -> Owner {
        self.states[id.idx()].owner
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn targets(&self) -> &BTreeSet<StateId> {
        &self.targets
    }

    pub fn is_target(&self, id: StateId) -> bool {
        self.targets.contains(&id)
    }

    /// Outgoing edges of `id` in declaration order.
    pub fn succ(&self, id: StateId) -> &[(StateId, i64)] {
        &self.succs[id.idx()]
    }

    pub fn edge_weight(&self, src: StateId, dst: StateId) -> Option<i64> {
        self.succs[src.idx()].iter().find(|&&(t, _)| t == dst).map(|&(_, w)| w)
    }

    pub fn edge_count(&self) -> usize {
        self.succs.iter().map(Vec::len).sum()
    }

    /// Maximum absolute edge weight W (0 for an edgeless graph).
    pub fn max_abs_weight(&self) -> i64 {
        self.succs
            .iter()
            .flat_map(|v| v.iter().map(|&(_, w)| w.abs()))
            .max()
            .unwrap_or(0)
    }

    /// Predecessor lists, computed on demand.
    pub fn preds(&self) -> Vec<Vec<StateId>> {
        let mut preds = vec![Vec::new(); self.n_states()];
        for s in self.state_ids() {
            for &(t, _) in self.succ(s) {
                preds[t.idx()].push(s);
            }
        }
        preds
    }

    /// States reachable from the initial state along any edges.
    pub fn reachable_from_initial(&self) -> BTreeSet<StateId> {
        let mut seen = BTreeSet::from([self.initial]);
        let mut queue = VecDeque::from([self.initial]);
        while let Some(s) = queue.pop_front() {
            for &(t, _) in self.succ(s) {
                if seen.insert(t) {
                    queue.push_back(t);
                }
            }
        }
        seen
    }

    /// Subgraph on `keep` with all edges between kept states; state names,
    /// declaration order and target markings are preserved. `initial` must be
    /// in `keep`.
    pub fn restrict(&self, keep: &BTreeSet<StateId>, initial: StateId) -> Restriction {
        assert!(keep.contains(&initial), "restriction must contain its initial state");
        let mut b = GameBuilder::new(&self.name);
        let mut to_sub: BTreeMap<StateId, StateId> = BTreeMap::new();
        let mut to_full: Vec<StateId> = Vec::new();
        for s in self.state_ids().filter(|s| keep.contains(s)) {
            let sub = b.state(self.state_name(s), self.owner(s)).expect("unique names");
            to_sub.insert(s, sub);
            to_full.push(s);
        }
        for (&full, &sub) in &to_sub {
            for &(t, w) in self.succ(full) {
                if let Some(&tsub) = to_sub.get(&t) {
                    b.edge_ids(sub, tsub, w);
                }
            }
            if self.is_target(full) {
                b.target_id(sub);
            }
        }
        b.init_id(to_sub[&initial]);
        Restriction { graph: b.finish().expect("initial kept"), to_sub, to_full }
    }

    /// Copy of the graph with a different initial state.
    pub fn with_initial(&self, initial: StateId) -> GameGraph {
        let mut g = self.clone();
        g.initial = initial;
        g
    }
}

/// A restricted subgame together with the state mappings in both directions.
#[derive(Clone, Debug)]
pub struct Restriction {
    pub graph: GameGraph,
    /// Full-graph id → subgraph id (only for kept states).
    pub to_sub: BTreeMap<StateId, StateId>,
    /// Subgraph id (by index) → full-graph id.
    pub to_full: Vec<StateId>,
}

/// Reports all structural violations: blocked states and duplicate edges.
pub fn validate(game: &GameGraph) -> Vec<Violation> {
    let mut out = Vec::new();
    for s in game.state_ids() {
        if game.succ(s).is_empty() {
            out.push(Violation::Deadlock(game.state_name(s).to_string()));
        }
        let mut seen = BTreeSet::new();
        for &(t, _) in game.succ(s) {
            if !seen.insert(t) {
                out.push(Violation::DuplicateEdge(
                    game.state_name(s).to_string(),
                    game.state_name(t).to_string(),
                ));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_state() -> GameGraph {
        let mut b = GameBuilder::new("t");
        b.state("a", Owner::P1).unwrap();
        b.state("b", Owner::P2).unwrap();
        b.edge("a", "b", 1).unwrap();
        b.edge("b", "a", -1).unwrap();
        b.init("a").unwrap();
        b.finish().unwrap()
    }

    #[test]
    fn builds_and_queries() {
        let g = two_state();
        assert_eq!(g.n_states(), 2);
        assert_eq!(g.state_name(StateId(0)), "a");
        assert_eq!(g.owner(StateId(1)), Owner::P2);
        assert_eq!(g.edge_weight(StateId(0), StateId(1)), Some(1));
        assert_eq!(g.max_abs_weight(), 1);
        assert!(validate(&g).is_empty());
    }

    #[test]
    fn validate_reports_deadlock() {
        let mut b = GameBuilder::new("t");
        b.state("s", Owner::P1).unwrap();
        b.init("s").unwrap();
        let g = b.finish().unwrap();
        assert_eq!(validate(&g), vec![Violation::Deadlock("s".into())]);
    }

    #[test]
    fn validate_reports_duplicate_edge() {
        let mut b = GameBuilder::new("t");
        b.state("s1", Owner::P1).unwrap();
        b.state("s2", Owner::P1).unwrap();
        b.edge("s1", "s2", 1).unwrap();
        b.edge("s1", "s2", 2).unwrap();
        b.edge("s2", "s1", 0).unwrap();
        b.init("s1").unwrap();
        let g = b.finish().unwrap();
        assert_eq!(validate(&g), vec![Violation::DuplicateEdge("s1".into(), "s2".into())]);
    }

    #[test]
    fn restriction_keeps_names_and_edges() {
        let g = two_state();
        let keep = BTreeSet::from([StateId(0)]);
        let r = g.restrict(&keep, StateId(0));
        assert_eq!(r.graph.n_states(), 1);
        assert_eq!(r.graph.state_name(StateId(0)), "a");
        assert!(r.graph.succ(StateId(0)).is_empty());
        assert_eq!(r.to_full, vec![StateId(0)]);
    }

    #[test]
    fn duplicate_state_rejected() {
        let mut b = GameBuilder::new("t");
        b.state("a", Owner::P1).unwrap();
        assert_eq!(b.state("a", Owner::P2), Err(BuildError::DuplicateState("a".into())));
    }
}
