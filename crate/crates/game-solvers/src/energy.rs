//! Mean-payoff threshold regions via energy games.
//!
//! A state has mean-payoff value `≥ a/b` exactly when, on the rescaled
//! weights `b·w − a`, player 1 can keep the running sum bounded from below —
//! an energy objective.  Strict comparison against `a/b` reduces to `≥ 0` on
//! weights `|S|·(b·w − a) − 1`, because game values are rationals with
//! denominator at most `|S|`, so a strictly positive value is at least
//! `1/|S|`.
//!
//! Energy games are solved by lifting a small progress measure to its least
//! fixed point.  The measure assigns each state the minimal initial credit
//! player 1 needs; credits above `|S|·W` (with `W` the largest absolute
//! weight) are equivalent to "unbounded" and collapse to ⊤.

use std::collections::BTreeSet;

use core_model::{GameGraph, Owner, Rational, StateId};

/// Least credit function of an energy game: for each state the minimal
/// initial credit that lets player 1 keep the sum nonnegative forever, or
/// `None` (⊤) when no finite credit suffices.
#[derive(Debug, Clone)]
pub struct ProgressMeasure {
    credit: Vec<Option<u128>>,
    bound: u128,
}

impl ProgressMeasure {
    /// Credit required at `s`; `None` means player 1 loses the energy game there.
    pub fn credit(&self, s: StateId) -> Option<u128> {
        self.credit[s.idx()]
    }

    /// Largest credit treated as finite; anything that would exceed it is ⊤.
    pub fn bound(&self) -> u128 {
        self.bound
    }

    /// States with a finite credit, i.e. winning for player 1.
    pub fn winning(&self, game: &GameGraph) -> BTreeSet<StateId> {
        game.state_ids().filter(|s| self.credit[s.idx()].is_some()).collect()
    }

    /// Least credit a successor reached over weight `w` demands at the source:
    /// the smallest `c ≥ 0` with `c + w ≥ credit(t)`, or ⊤ past the bound.
    pub(crate) fn demand(&self, target: StateId, w: i128) -> Option<u128> {
        let ft = self.credit[target.idx()]?;
        let need = if w >= 0 { ft.saturating_sub(w as u128) } else { ft + w.unsigned_abs() };
        if need > self.bound {
            None
        } else {
            Some(need)
        }
    }
}

/// `None` is ⊤ and sorts above every finite credit.
fn credit_gt(a: Option<u128>, b: Option<u128>) -> bool {
    match (a, b) {
        (None, None) => false,
        (None, Some(_)) => true,
        (Some(_), None) => false,
        (Some(x), Some(y)) => x > y,
    }
}

/// Solves the energy game on `game` with per-edge weights `weight(w)`.
///
/// Chaotic iteration from the all-zero measure: each pop recomputes the best
/// response at one state (min over successors for player 1, max for player 2)
/// and re-enqueues predecessors when the credit strictly grows.  Credits only
/// increase and are capped by `bound + 1` values, so the loop performs at most
/// `|S|·(bound + 2)` lifts.
pub(crate) fn energy_measure(game: &GameGraph, weight: impl Fn(i64) -> i128) -> ProgressMeasure {
    let n = game.n_states();
    let w_max: u128 = game
        .state_ids()
        .flat_map(|s| game.succ(s).iter().map(|(_, w)| weight(*w).unsigned_abs()))
        .max()
        .unwrap_or(0);
    let bound = (n as u128) * w_max;
    let mut pm = ProgressMeasure { credit: vec![Some(0); n], bound };

    let preds = game.preds();
    let mut queued = vec![true; n];
    let mut queue: Vec<StateId> = game.state_ids().collect();
    while let Some(s) = queue.pop() {
        queued[s.idx()] = false;
        let mut best: Option<Option<u128>> = None;
        for &(t, w) in game.succ(s) {
            let d = pm.demand(t, weight(w));
            best = Some(match best {
                None => d,
                Some(cur) => match game.owner(s) {
                    Owner::P1 => {
                        if credit_gt(cur, d) {
                            d
                        } else {
                            cur
                        }
                    }
                    Owner::P2 => {
                        if credit_gt(d, cur) {
                            d
                        } else {
                            cur
                        }
                    }
                },
            });
        }
        let target = best.expect("game states are non-blocking");
        if credit_gt(target, pm.credit[s.idx()]) {
            pm.credit[s.idx()] = target;
            for &p in &preds[s.idx()] {
                if !queued[p.idx()] {
                    queued[p.idx()] = true;
                    queue.push(p);
                }
            }
        }
    }
    pm
}

fn threshold_parts(threshold: &Rational) -> (i128, i128) {
    threshold
        .to_i128_parts()
        .expect("threshold numerator and denominator must fit in 128-bit integers")
}

/// States whose worst-case mean payoff is `≥ threshold`.
pub fn mp_at_least_region(game: &GameGraph, threshold: &Rational) -> BTreeSet<StateId> {
    let (a, b) = threshold_parts(threshold);
    energy_measure(game, |w| b * (w as i128) - a).winning(game)
}

/// States whose worst-case mean payoff is `> threshold`.
pub fn mp_strictly_above_region(game: &GameGraph, threshold: &Rational) -> BTreeSet<StateId> {
    let (a, b) = threshold_parts(threshold);
    let n = game.n_states() as i128;
    energy_measure(game, |w| n * (b * (w as i128) - a) - 1).winning(game)
}

/// States whose worst-case mean payoff is strictly positive.
pub fn mp_strictly_positive_region(game: &GameGraph) -> BTreeSet<StateId> {
    mp_strictly_above_region(game, &Rational::zero())
}

/// Progress measure of the strict-threshold energy game; shared with strategy
/// extraction so the chosen edges certify the same measure.
pub(crate) fn strict_measure(game: &GameGraph, threshold: &Rational) -> (ProgressMeasure, impl Fn(i64) -> i128) {
    let (a, b) = threshold_parts(threshold);
    let n = game.n_states() as i128;
    let weight = move |w: i64| n * (b * (w as i128) - a) - 1;
    (energy_measure(game, &weight), weight)
}
