//! Reduction from the K-th largest subset problem to a shortest-path
//! decision.
//!
//! The question "are there at least `k` distinct subsets `C` of `A` with
//! `h(C) <= l`?" becomes a game: a chain of adversary states flips a fair
//! coin per element (the expensive edge selects it, the cheap edge skips it),
//! then a single choice state lets the controller either gamble on a state
//! whose rare expensive exit breaks the budget exactly when the selected
//! subset was too large, or take a safe exit that always fits the budget but
//! costs more in expectation. Thresholds are arranged so the answer carries
//! over both ways.

use crate::GenError;
use core_model::{
    BwcInstance, Distribution, GameBuilder, MachineBuilder, MooreMachine, Objective, Owner,
    Rational,
};
use num_bigint::BigInt;

/// A K-th largest subset question over elements of the given sizes.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct KthSubsetInstance {
    sizes: Vec<u64>,
    k: u64,
    l: u64,
}

/// Bounds keeping every derived weight inside `i64` (the budget grows as
/// `2^(n+1) · n · (n+1) · h(A)`).
const MAX_ELEMENTS: usize = 24;
const MAX_TOTAL_SIZE: u64 = 1 << 20;

impl KthSubsetInstance {
    /// `sizes` lists `h(a)` per element, all at least 1; `k >= 1` (with
    /// `k = 0` every answer would be yes and no expectation threshold below
    /// the budget could express it).
    pub fn new(sizes: Vec<u64>, k: u64, l: u64) -> Result<Self, GenError> {
        if sizes.is_empty() {
            return Err(GenError::BadParameter("need at least one element".to_string()));
        }
        if sizes.len() > MAX_ELEMENTS {
            return Err(GenError::BadParameter(format!(
                "at most {MAX_ELEMENTS} elements supported, got {}",
                sizes.len()
            )));
        }
        if sizes.iter().any(|&h| h == 0) {
            return Err(GenError::BadParameter("element sizes must be at least 1".to_string()));
        }
        if sizes.iter().sum::<u64>() > MAX_TOTAL_SIZE {
            return Err(GenError::BadParameter("total element size is too large".to_string()));
        }
        if k == 0 {
            return Err(GenError::BadParameter("need k >= 1".to_string()));
        }
        Ok(KthSubsetInstance { sizes, k, l })
    }

    pub fn sizes(&self) -> &[u64] {
        &self.sizes
    }

    pub fn n(&self) -> usize {
        self.sizes.len()
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn l(&self) -> u64 {
        self.l
    }
}

/// Derived constants of the reduction, exposed so tests can pin them.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct KthConstants {
    /// Per-element chain weight `(n+1) · h(a)`.
    pub scaled: Vec<u64>,
    /// Largest possible chain total (select everything).
    pub q: u64,
    /// The size bound actually encoded: `min(l, h(A))` — anything above the
    /// total size accepts the same subsets.
    pub l_effective: u64,
    /// Largest chain total of an acceptable subset: `(n+1)(l_eff + 1) − 1`.
    pub t_bound: u64,
    /// Worst-case budget `2^(n+1) · n · (q + 2)`.
    pub mu: u64,
    /// Gamble exit's rare cost `mu − t_bound − 2`.
    pub x1: u64,
    /// Gamble exit's usual cost.
    pub x2: u64,
    /// Safe exit's cost `mu − q − 2`.
    pub x3: u64,
    /// Expectation threshold `(k(t_bound + 2) + (2^n − k) mu) / 2^n`.
    pub nu: Rational,
}

pub fn kth_constants(inst: &KthSubsetInstance) -> KthConstants {
    let n = inst.n() as u64;
    let scaled: Vec<u64> = inst.sizes.iter().map(|&h| (n + 1) * h).collect();
    let q: u64 = scaled.iter().sum();
    let l_effective = inst.l.min(inst.sizes.iter().sum::<u64>());
    let t_bound = (n + 1) * (l_effective + 1) - 1;
    let mu = (1u64 << (n + 1)) * n * (q + 2);
    let x1 = mu - t_bound - 2;
    let x3 = mu - q - 2;
    let pow = BigInt::from(1u64) << inst.n();
    let num = BigInt::from(inst.k) * BigInt::from(t_bound + 2)
        + (pow.clone() - BigInt::from(inst.k)) * BigInt::from(mu);
    let nu = Rational::from_big(num, pow);
    KthConstants { scaled, q, l_effective, t_bound, mu, x1, x2: 1, x3, nu }
}

/// Chain total of the path selecting exactly the subset in `mask` (bit `i`
/// set selects element `i`): scaled weights of selected elements plus 1 per
/// skipped element.
pub fn subset_path_total(inst: &KthSubsetInstance, mask: u64) -> u64 {
    let n = inst.n() as u64;
    let mut total = 0;
    for (i, &h) in inst.sizes.iter().enumerate() {
        if mask & (1 << i) != 0 {
            total += (n + 1) * h;
        } else {
            total += 1;
        }
    }
    total
}

/// Builds the shortest-path decision instance equivalent to `inst`.
///
/// Expensive chain edges and the gamble's rare exit are split across
/// pass-through dummies (`b<i>`, `e1`) so all weights stay at least 1; the
/// cheap edges have weight 1 and stay direct. Each adversary chain state
/// keeps exactly two outgoing edges played with probability 1/2 each.
pub fn reduce_kth_subset(inst: &KthSubsetInstance) -> BwcInstance {
    let c = kth_constants(inst);
    let n = inst.n();
    let mut gb = GameBuilder::new("kth");
    for i in 1..=n {
        gb.state(&format!("a{i}"), Owner::P2).unwrap();
        gb.state(&format!("b{i}"), Owner::P1).unwrap();
    }
    gb.state("choice", Owner::P1).unwrap();
    gb.state("se", Owner::P2).unwrap();
    gb.state("swc", Owner::P2).unwrap();
    gb.state("e1", Owner::P1).unwrap();
    gb.state("target", Owner::P1).unwrap();
    let half = |w: u64| ((w + 1) / 2, w / 2);
    for i in 1..=n {
        let hw = c.scaled[i - 1];
        let (up, down) = half(hw);
        let next = if i < n { format!("a{}", i + 1) } else { "choice".to_string() };
        gb.edge(&format!("a{i}"), &format!("b{i}"), up as i64).unwrap();
        gb.edge(&format!("b{i}"), &next, down as i64).unwrap();
        gb.edge(&format!("a{i}"), &next, 1).unwrap();
    }
    gb.edge("choice", "se", 1).unwrap();
    gb.edge("choice", "swc", 1).unwrap();
    gb.edge("se", "target", 1).unwrap();
    let (x1_up, x1_down) = half(c.x1);
    gb.edge("se", "e1", x1_up as i64).unwrap();
    gb.edge("e1", "target", x1_down as i64).unwrap();
    gb.edge("swc", "target", c.x3 as i64).unwrap();
    gb.edge("target", "target", 1).unwrap();
    gb.init("a1").unwrap();
    gb.target("target").unwrap();
    let game = gb.finish().unwrap();

    let mut mb = MachineBuilder::new("fair_selection");
    let m0 = mb.memory("m0").unwrap();
    mb.init_id(m0);
    for s in game.state_ids() {
        mb.update_id(m0, s, m0);
    }
    let id = |name: &str| game.state_id(name).expect("declared above");
    let halfp = Rational::new(1, 2);
    for i in 1..=n {
        let next = if i < n { format!("a{}", i + 1) } else { "choice".to_string() };
        mb.output_dist(
            m0,
            id(&format!("a{i}")),
            Distribution(vec![
                (id(&format!("b{i}")), halfp.clone()),
                (id(&next), halfp.clone()),
            ]),
        );
    }
    mb.output_dist(
        m0,
        id("se"),
        Distribution(vec![(id("target"), Rational::one()), (id("e1"), Rational::zero())]),
    );
    mb.output_dist(m0, id("swc"), Distribution::dirac(id("target")));
    let model: MooreMachine = mb.finish().unwrap();

    let targets = game.targets().clone();
    BwcInstance::new(
        game,
        model,
        Rational::new(c.mu as i64, 1),
        c.nu,
        Objective::ShortestPath(targets),
    )
    .expect("reduction output is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(sizes: &[u64], k: u64, l: u64) -> KthSubsetInstance {
        KthSubsetInstance::new(sizes.to_vec(), k, l).unwrap()
    }

    #[test]
    fn toy_constants_match_hand_derivation() {
        let c = kth_constants(&inst(&[3], 1, 3));
        assert_eq!(c.scaled, vec![6]);
        assert_eq!(c.q, 6);
        assert_eq!(c.t_bound, 7);
        assert_eq!(c.mu, 32);
        assert_eq!(c.x1, 23);
        assert_eq!(c.x2, 1);
        assert_eq!(c.x3, 24);
        assert_eq!(c.nu, Rational::new(41, 2));
    }

    #[test]
    fn toy_reduction_shape() {
        let reduced = reduce_kth_subset(&inst(&[3], 1, 3));
        assert_eq!(reduced.game.n_states(), 7); // 2n + 5
        assert_eq!(reduced.mu, Rational::new(32, 1));
        assert_eq!(reduced.nu, Rational::new(41, 2));
        let g = &reduced.game;
        let id = |n: &str| g.state_id(n).unwrap();
        // Split halves restore the drawn totals.
        assert_eq!(
            g.edge_weight(id("a1"), id("b1")).unwrap() + g.edge_weight(id("b1"), id("choice")).unwrap(),
            6
        );
        assert_eq!(
            g.edge_weight(id("se"), id("e1")).unwrap() + g.edge_weight(id("e1"), id("target")).unwrap(),
            23
        );
        // The gamble's rare exit is in the game but not in the model's support.
        let m0 = reduced.model.initial_memory();
        let at_se = reduced.model.output(m0, id("se")).unwrap();
        assert_eq!(at_se.prob(id("e1")), Rational::zero());
        assert_eq!(at_se.prob(id("target")), Rational::one());
    }

    #[test]
    fn chain_totals_encode_subset_sizes() {
        let cases: Vec<(Vec<u64>, u64)> = vec![
            (vec![1], 0),
            (vec![3], 3),
            (vec![1, 1], 1),
            (vec![2, 3], 4),
            (vec![1, 2, 3], 3),
            (vec![4, 4, 4, 4], 8),
            (vec![1, 1, 1, 1, 1, 1, 2], 4),
            (vec![3, 1, 4, 1, 2, 2, 1, 3], 9),
        ];
        for (sizes, l) in cases {
            let i = inst(&sizes, 1, l);
            let c = kth_constants(&i);
            let n = sizes.len() as u64;
            for mask in 0u64..(1 << sizes.len()) {
                let h: u64 = (0..sizes.len())
                    .filter(|&j| mask & (1 << j) != 0)
                    .map(|j| sizes[j])
                    .sum();
                let t = subset_path_total(&i, mask);
                // Chain totals pin the exact bound...
                assert_eq!(
                    h == c.l_effective,
                    (n + 1) * c.l_effective <= t && t < (n + 1) * (c.l_effective + 1),
                    "sizes {sizes:?} l {l} mask {mask:b}"
                );
                // ...and acceptability is exactly the budget check the game makes.
                assert_eq!(h <= c.l_effective, t <= c.t_bound);
            }
        }
    }

    #[test]
    fn oversize_bound_is_clamped() {
        let a = kth_constants(&inst(&[2, 2], 1, 100));
        let b = kth_constants(&inst(&[2, 2], 1, 4));
        assert_eq!(a.t_bound, b.t_bound);
        assert_eq!(a.nu, b.nu);
    }

    #[test]
    fn bad_parameters_are_rejected() {
        assert!(KthSubsetInstance::new(vec![], 1, 1).is_err());
        assert!(KthSubsetInstance::new(vec![1, 0], 1, 1).is_err());
        assert!(KthSubsetInstance::new(vec![1], 0, 1).is_err());
        assert!(KthSubsetInstance::new(vec![1; 25], 1, 1).is_err());
    }

    #[test]
    fn all_weights_stay_positive() {
        for (sizes, k, l) in
            [(vec![1u64], 1, 0), (vec![1, 1, 1], 2, 1), (vec![4, 3, 2, 1], 5, 5)]
        {
            let reduced = reduce_kth_subset(&inst(&sizes, k, l));
            for s in reduced.game.state_ids() {
                for &(_, w) in reduced.game.succ(s) {
                    assert!(w >= 1);
                }
            }
        }
    }
}
