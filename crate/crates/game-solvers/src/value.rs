//! Exact worst-case mean-payoff values.

use core_model::{GameGraph, Rational, StateId};

use crate::energy::mp_at_least_region;

/// Exact worst-case mean-payoff value of `state`: the best mean payoff
/// player 1 can guarantee against every adversary behaviour.
///
/// Game values are cycle means of the graph, hence rationals `a/b` with
/// `1 ≤ b ≤ |S|` and `|a/b| ≤ W`.  A binary search over the grid of
/// multiples of `1/|S|²` narrows the value to a half-open interval shorter
/// than the minimal gap between two candidate fractions, after which the
/// unique candidate inside the interval is recovered by scanning
/// denominators in increasing order.
pub fn mp_optimal_value(game: &GameGraph, state: StateId) -> Rational {
    let n = game.n_states() as i128;
    let w = game.max_abs_weight() as i128;
    let d = n * n;
    // Invariant: value ∈ [k_lo/d, k_hi/d).
    let mut k_lo = -w * d;
    let mut k_hi = w * d + 1;
    while k_hi - k_lo > 1 {
        let k_mid = (k_lo + k_hi).div_euclid(2);
        let t = Rational::from_big(k_mid.into(), d.into());
        if mp_at_least_region(game, &t).contains(&state) {
            k_lo = k_mid;
        } else {
            k_hi = k_mid;
        }
    }
    let lo = Rational::from_big(k_lo.into(), d.into());
    let hi = Rational::from_big(k_hi.into(), d.into());
    for b in 1..=n {
        // Smallest numerator with a/b ≥ lo.
        let a = -(-(&lo * &Rational::from_big(b.into(), 1.into()))).floor_big();
        let cand = Rational::from_big(a, b.into());
        if cand < hi {
            return cand;
        }
    }
    unreachable!("a game value with denominator at most |S| lies in the final interval")
}

#[cfg(test)]
mod tests {
    use super::*;
    use core_model::{GameBuilder, Owner};

    #[test]
    fn values_of_competing_loops() {
        let mut b = GameBuilder::new("loops");
        let p = b.state("p", Owner::P1).unwrap();
        let q = b.state("q", Owner::P2).unwrap();
        let up = b.state("up", Owner::P1).unwrap();
        let dn = b.state("dn", Owner::P1).unwrap();
        b.edge_ids(p, up, 1);
        b.edge_ids(p, dn, -1);
        b.edge_ids(q, up, 1);
        b.edge_ids(q, dn, -1);
        b.edge_ids(up, up, 1);
        b.edge_ids(dn, dn, -1);
        b.init_id(p);
        let g = b.finish().unwrap();
        assert_eq!(mp_optimal_value(&g, p), Rational::one());
        assert_eq!(mp_optimal_value(&g, q), -Rational::one());
        assert_eq!(mp_optimal_value(&g, up), Rational::one());
        assert_eq!(mp_optimal_value(&g, dn), -Rational::one());
    }

    #[test]
    fn fractional_cycle_value() {
        let mut b = GameBuilder::new("third");
        let x = b.state("x", Owner::P1).unwrap();
        let y = b.state("y", Owner::P1).unwrap();
        let z = b.state("z", Owner::P1).unwrap();
        b.edge_ids(x, y, 1);
        b.edge_ids(y, z, 0);
        b.edge_ids(z, x, 0);
        b.init_id(x);
        let g = b.finish().unwrap();
        assert_eq!(mp_optimal_value(&g, x), Rational::new(1, 3));
    }

    #[test]
    fn negative_fractional_value_under_pressure() {
        // P2 alternates: from `y` it can return at -1 or detour over z at 0;
        // the best P1 can guarantee is the worse of the two cycles.
        let mut b = GameBuilder::new("press");
        let x = b.state("x", Owner::P1).unwrap();
        let y = b.state("y", Owner::P2).unwrap();
        let z = b.state("z", Owner::P1).unwrap();
        b.edge_ids(x, y, 1);
        b.edge_ids(y, x, -2);
        b.edge_ids(y, z, 0);
        b.edge_ids(z, x, -2);
        b.init_id(x);
        let g = b.finish().unwrap();
        // Cycles: x→y→x mean -1/2, x→y→z→x mean -1/3; P2 picks -1/2.
        assert_eq!(mp_optimal_value(&g, x), Rational::new(-1, 2));
    }
}
