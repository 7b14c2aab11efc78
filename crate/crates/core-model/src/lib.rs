//! Exact domain types for beyond-worst-case synthesis on weighted games.
//!
//! This crate holds the shared vocabulary of the workspace: exact rationals,
//! weighted two-player game graphs, stochastic Moore machines, MDPs, Markov
//! chains, problem instances, and the product/fixing constructions between
//! them. Everything is immutable after construction and exact; all iteration
//! follows state declaration order so downstream tie-breaking and reports are
//! reproducible.

#![forbid(unsafe_code)]

pub mod exec;
mod graph;
mod instance;
mod machine;
mod mdp;
mod product;
mod rational;

pub use exec::{configure_threads, Exec};
pub use graph::{
    validate, BuildError, GameBuilder, GameGraph, Owner, Restriction, StateId, Violation,
};
pub use instance::{BwcInstance, EcClass, EndComponent, InstanceError, Objective};
pub use machine::{
    validate_machine, Distribution, MachineBuildError, MachineBuilder, MachineViolation, MemId,
    MooreMachine, PureStrategy,
};
pub use mdp::{FixError, MarkovChain, Mdp};
pub use product::{
    fix_both, fix_player2, product_with_machine, transform_weights_mp, FixedChain, Product,
    ProductError,
};
pub use rational::{ExtRational, Rational};
