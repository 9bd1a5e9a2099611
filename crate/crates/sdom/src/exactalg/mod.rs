//! Exact algebra: rationals, polynomials, and sign analysis on intervals.

mod interval;
mod polynomial;
mod rational;
mod sturm;

pub use interval::RealInterval;
pub use polynomial::Polynomial;
pub use rational::{
    decimal_approx, factorial, parse_rational, pow, rat, rat_int, ParseRationalError, Rational,
};
pub use sturm::{cauchy_root_bound, count_real_roots, is_nonnegative_on, NonnegOutcome, PolyError};
