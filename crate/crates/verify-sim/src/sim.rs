//! Deterministic Monte-Carlo estimation of a fixed strategy's value.
//!
//! The generator is ChaCha8 with a 64-bit seed; run `i` uses `seed ^ i`, so
//! results are identical across platforms and across sequential/parallel
//! execution. Sampling is exact: each distribution is drawn over its common
//! denominator with rejection, so rational probabilities are honored without
//! floating-point bias.

use core_model::exec::{map_indexed, Exec};
use core_model::{Distribution, GameGraph, MooreMachine, Objective, Owner, StateId};
use num_integer::Integer;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

/// Summary statistics of a batch of simulated runs.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct SimStats {
    pub mean: f64,
    /// Sample standard deviation (n − 1 divisor); 0 for a single run.
    pub sd: f64,
    pub runs: u64,
    pub horizon: u64,
    /// Fraction of shortest-path runs that hit the horizon before the target
    /// (always 0 for mean payoff, where every run uses the full horizon).
    pub truncated: f64,
    pub seed: u64,
}

impl SimStats {
    /// Standard error of the mean.
    pub fn std_error(&self) -> f64 {
        self.sd / (self.runs as f64).sqrt()
    }
}

/// Samples one successor, exactly, from a rational distribution.
fn sample(dist: &Distribution, rng: &mut ChaCha8Rng) -> StateId {
    let mut den: u128 = 1;
    for (_, p) in dist.entries() {
        let d = u128::try_from(p.denom()).expect("positive denominator");
        den = den / den.gcd(&d) * d;
    }
    let den_u64 = u64::try_from(den).expect("common denominator fits u64");
    let r = draw_below(rng, den_u64) as u128;
    let mut acc: u128 = 0;
    for (t, p) in dist.entries() {
        let num = u128::try_from(p.numer()).expect("probabilities are nonnegative");
        let d = u128::try_from(p.denom()).expect("positive denominator");
        acc += num * (den / d);
        if r < acc {
            return *t;
        }
    }
    unreachable!("distribution sums to one")
}

/// Uniform draw from `[0, n)` by rejection — no modulo bias.
fn draw_below(rng: &mut ChaCha8Rng, n: u64) -> u64 {
    debug_assert!(n > 0);
    let rem = ((u64::MAX % n) + 1) % n;
    if rem == 0 {
        return rng.next_u64() % n;
    }
    let zone = u64::MAX - rem + 1;
    loop {
        let x = rng.next_u64();
        if x < zone {
            return x % n;
        }
    }
}

fn one_run(
    game: &GameGraph,
    strategy: &MooreMachine,
    model: &MooreMachine,
    objective: &Objective,
    horizon: u64,
    run_seed: u64,
) -> (f64, bool) {
    let mut rng = ChaCha8Rng::seed_from_u64(run_seed);
    let mut s = game.initial();
    let mut m1 = strategy.initial_memory();
    let mut m2 = model.initial_memory();
    let mut total: i64 = 0;
    let targets = match objective {
        Objective::ShortestPath(t) => Some(t),
        Objective::MeanPayoff => None,
    };
    for _ in 0..horizon {
        if let Some(t) = targets {
            if t.contains(&s) {
                return (total as f64, false);
            }
        }
        let dist = match game.owner(s) {
            Owner::P1 => strategy.output(m1, s),
            Owner::P2 => model.output(m2, s),
        }
        .expect("machines are total on reachable states");
        let t = sample(dist, &mut rng);
        total += game.edge_weight(s, t).expect("support stays within successors");
        m1 = strategy.update(m1, s).expect("total");
        m2 = model.update(m2, s).expect("total");
        s = t;
    }
    match targets {
        None => (total as f64 / horizon as f64, false),
        Some(t) => (total as f64, !t.contains(&s)),
    }
}

/// Simulates `runs` independent plays of the strategy against the model and
/// reports sample mean and standard deviation of the objective value
/// (finite-prefix mean payoff over `horizon` steps, or the accumulated cost
/// until the target for shortest path). Deterministic for a fixed seed in
/// both execution modes.
#[allow(clippy::too_many_arguments)]
pub fn simulate(
    game: &GameGraph,
    strategy: &MooreMachine,
    model: &MooreMachine,
    objective: &Objective,
    runs: u64,
    horizon: u64,
    seed: u64,
    exec: Exec,
) -> SimStats {
    assert!(runs >= 1, "need at least one run");
    assert!(horizon >= 1, "need a positive horizon");
    let samples: Vec<(f64, bool)> = map_indexed(exec, runs as usize, |i| {
        one_run(game, strategy, model, objective, horizon, seed ^ (i as u64))
    });
    let n = runs as f64;
    let mean = samples.iter().map(|&(v, _)| v).sum::<f64>() / n;
    let sd = if runs > 1 {
        (samples.iter().map(|&(v, _)| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    let truncated = samples.iter().filter(|&&(_, t)| t).count() as f64 / n;
    SimStats { mean, sd, runs, horizon, truncated, seed }
}
