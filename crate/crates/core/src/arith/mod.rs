//! Exact rationals and univariate rational polynomials.
//!
//! Everything downstream (windows, patterns, large-set checks) computes with
//! these values; hot loops work on window indices instead.

pub(crate) mod parse;
mod poly;
mod rational;

pub use poly::{difference_degree_check, iterated_difference, PolynomialQ};
pub use rational::Rational;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("degenerate rational: zero denominator")]
    DegenerateRational,
    #[error("syntax error at {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("difference check needs at least one sample")]
    EmptySamples,
    #[error("difference shifts must be nonzero")]
    ZeroShift,
}
