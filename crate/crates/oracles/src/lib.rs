//! Reference results by exhaustive enumeration.
//!
//! Everything here is deliberately naive: strategies and policies are
//! enumerated outright, linear systems are solved by a private Gaussian
//! elimination, and end components are found by filtering all state subsets.
//! None of the production solver code is reused, so agreement between a
//! solver and this crate checks two independent routes to the same value.
//! Sizes are expected to be tiny (≤ 5 or 6 states); nothing here is fast.

#![forbid(unsafe_code)]

mod chains;
mod cycles;
mod games;
mod mdps;

pub use chains::{expected_mp_of_chain, expected_ts_of_chain, reach_prob_paths, solve_linear};
pub use cycles::{enumerate_cycle_means, min_cycle_mean_enumerated};
pub use games::{mp_game_values, mp_response_value};
pub use mdps::{
    all_policies, decide_mp, induced_chain, is_end_component, max_expected_mp, min_expected_ts,
    mwec_subsets, BruteChain,
};

/// Number of subsets `C` of `sizes` with `h(C) ≤ l` (the counting problem the
/// hardness reduction encodes).
pub fn count_subsets_within(sizes: &[u64], l: u64) -> u64 {
    let n = sizes.len();
    assert!(n <= 24, "subset enumeration capped at 24 elements");
    let mut count = 0;
    for mask in 0u64..(1 << n) {
        let total: u64 = (0..n).filter(|&i| mask & (1 << i) != 0).map(|i| sizes[i]).sum();
        if total <= l {
            count += 1;
        }
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subset_counting() {
        // h = {1, 2}: subsets {} 0, {1} 1, {2} 2, {1,2} 3.
        assert_eq!(count_subsets_within(&[1, 2], 0), 1);
        assert_eq!(count_subsets_within(&[1, 2], 1), 2);
        assert_eq!(count_subsets_within(&[1, 2], 2), 3);
        assert_eq!(count_subsets_within(&[1, 2], 3), 4);
    }
}
