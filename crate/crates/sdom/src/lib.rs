//! Exact decision procedures for higher-order stochastic dominance.
//!
//! Distributions are finitely supported with rational atoms, and every
//! check is carried out in exact rational arithmetic: a verdict is a
//! proof, not an approximation. Checks that fail return typed witnesses
//! (a point where the iterated CDFs cross, a reference-interval boundary
//! condition that breaks, or a mismatched moment) that can be re-verified
//! independently of the code path that produced them.

pub mod constructions;
pub mod dist;
pub mod dominance;
pub mod dual;
pub mod exactalg;
pub mod harness;

pub use dist::DiscreteDistribution;
pub use dominance::{Verdict, Witness};
pub use exactalg::{Polynomial, Rational, RealInterval};
