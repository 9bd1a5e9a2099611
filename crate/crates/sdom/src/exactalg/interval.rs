//! Intervals over the extended real line with rational endpoints.

use super::rational::Rational;
use std::fmt;

/// An interval of the real line. `None` endpoints stand for -inf / +inf;
/// they are range markers only and never participate in arithmetic.
/// When both endpoints are finite, `lo <= hi` holds.
///
/// The type itself does not fix whether endpoints are included; each
/// operation taking a `RealInterval` documents its own convention.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RealInterval {
    lo: Option<Rational>,
    hi: Option<Rational>,
}

impl RealInterval {
    /// `[lo, hi]` with finite endpoints. Panics if `lo > hi`.
    pub fn closed(lo: Rational, hi: Rational) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        RealInterval {
            lo: Some(lo),
            hi: Some(hi),
        }
    }

    /// `[lo, +inf)`.
    pub fn at_least(lo: Rational) -> Self {
        RealInterval {
            lo: Some(lo),
            hi: None,
        }
    }

    /// `(-inf, hi]`.
    pub fn at_most(hi: Rational) -> Self {
        RealInterval {
            lo: None,
            hi: Some(hi),
        }
    }

    /// The whole real line.
    pub fn all() -> Self {
        RealInterval { lo: None, hi: None }
    }

    pub fn lo(&self) -> Option<&Rational> {
        self.lo.as_ref()
    }

    pub fn hi(&self) -> Option<&Rational> {
        self.hi.as_ref()
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.lo.as_ref().map_or(true, |lo| lo <= x) && self.hi.as_ref().map_or(true, |hi| x <= hi)
    }
}

impl fmt::Display for RealInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.lo() {
            Some(lo) => write!(f, "[{lo}, ")?,
            None => write!(f, "(-inf, ")?,
        }
        match self.hi() {
            Some(hi) => write!(f, "{hi}]"),
            None => write!(f, "+inf)"),
        }
    }
}
