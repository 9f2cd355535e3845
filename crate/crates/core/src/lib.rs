//! Search, certificates and a constructive Builder strategy for the online
//! Ramsey game "red C4 versus blue path".
//!
//! * [`graph`]: bit-matrix positions and the shared predicates.
//! * [`rules`]: game parameters, legality and terminal detection.
//! * [`solver`]: exhaustive search of the bounded game.
//! * [`book`]: strategy books, their verifier and a replay index.
//! * [`engine`]: the inductive Builder strategy for arbitrary `n`.
//! * [`harness`]: Painter policies and the match runner.

pub mod board;
pub mod book;
pub mod config;
pub mod engine;
pub mod graph;
pub mod harness;
pub mod rules;
pub mod solver;
