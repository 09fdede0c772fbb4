//! Termination analysis for higher-order rewrite systems with static
//! dependency pairs.
//!
//! The pipeline is: [`format`] parses a system, [`pfp`] checks that it is
//! plain function-passing, [`sdp`] extracts pairs, [`graph`] finds recursion
//! components, [`criteria`] discharges them, and [`prover`] ties the stages
//! together. [`rewrite`] executes systems and searches for loops.

pub mod criteria;
pub mod format;
pub mod graph;
pub mod pfp;
pub mod prover;
pub mod rewrite;
pub mod sdp;
pub mod term;
pub mod types;
