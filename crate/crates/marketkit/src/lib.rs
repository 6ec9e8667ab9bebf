//! Temporary build skeleton; full docs restored as modules land.
pub mod lp;
pub mod order;
pub(crate) mod sampling;
#[cfg(test)]
pub(crate) mod testkit;
pub mod market;
pub mod measures;
pub mod power;
pub mod rational;

pub use lp::{LpEngine, LpProblem, LpSolution};
pub use rational::Rational;
