//! Local-encoding hitting-set generators over exact fields.
//!
//! The crate compiles arithmetic circuits into degree-2 polynomial maps
//! ("local encodings"), synthesizes and checks the principal generator of
//! their annihilator ideals, and provides the surrounding toolkit: randomized
//! and generator-based identity testing, Jacobian ranks, resultants, and
//! checkers for ideal-proof-system refutations.

pub mod algebra_tools;
pub mod annihilator;
pub mod circuit;
pub mod encoding;
pub mod field;
pub mod instances;
pub mod ips;
pub mod linalg;
pub mod pit;
pub mod poly;
