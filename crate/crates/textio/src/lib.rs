//! Line-oriented text formats for the game-analysis toolkit.
//!
//! Four file kinds share one token-per-whitespace grammar with `#` comments:
//! `.bwcg` games, `.bwcm` stochastic Moore machines (models and strategies),
//! `.bwci` instance bundles referencing the other two, and key-value verdict
//! reports. Parsers collect every diagnostic with a 1-based [`SourceSpan`]
//! instead of stopping at the first; serializers round-trip structurally.
//! [`to_dot`] and [`chain_to_dot`] render graphs for external viewers.

#![forbid(unsafe_code)]

mod diag;
mod dot;
mod game;
mod instance;
mod machine;
mod verdict;

pub use diag::{Diagnostic, SourceSpan};
pub use dot::{chain_to_dot, to_dot};
pub use game::{parse_game, parse_game_with, serialize_game, split_all_edges, MultiEdges};
pub use instance::{
    load_instance, parse_instance, serialize_instance, InstanceFile, LoadError, ObjectiveTag,
};
pub use machine::{parse_machine, serialize_machine};
pub use verdict::{parse_verdict, serialize_verdict, Verdict};
