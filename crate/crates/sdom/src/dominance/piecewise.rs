//! Iterated CDFs of discrete distributions as piecewise polynomials.
//!
//! For order n >= 2 the n-fold iterated CDF of a finitely supported
//! distribution is, on each interval between consecutive atoms, the
//! polynomial `sum_{x_j <= t} p_j (eta - x_j)^(n-1) / (n-1)!`. Keeping
//! that segment form explicit is what lets the dominance checks reduce to
//! exact polynomial sign queries.

use crate::dist::DiscreteDistribution;
use crate::exactalg::{factorial, Polynomial, Rational};

/// A function that is 0 left of the first breakpoint and polynomial
/// between consecutive breakpoints; `segments[i]` applies on
/// `[breakpoints[i], breakpoints[i+1])` and the last segment extends to
/// +inf. Breakpoints are sorted and distinct, and there is one segment
/// per breakpoint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiecewisePoly {
    breakpoints: Vec<Rational>,
    segments: Vec<Polynomial>,
}

impl PiecewisePoly {
    pub(crate) fn new(breakpoints: Vec<Rational>, segments: Vec<Polynomial>) -> Self {
        assert_eq!(breakpoints.len(), segments.len());
        assert!(!breakpoints.is_empty());
        debug_assert!(breakpoints.windows(2).all(|w| w[0] < w[1]));
        PiecewisePoly {
            breakpoints,
            segments,
        }
    }

    pub fn breakpoints(&self) -> &[Rational] {
        &self.breakpoints
    }

    pub fn segments(&self) -> &[Polynomial] {
        &self.segments
    }

    /// Index of the segment whose half-open piece contains `eta`, or
    /// `None` left of the first breakpoint.
    pub fn segment_index(&self, eta: &Rational) -> Option<usize> {
        match self.breakpoints.binary_search(eta) {
            Ok(i) => Some(i),
            Err(0) => None,
            Err(i) => Some(i - 1),
        }
    }

    pub fn eval(&self, eta: &Rational) -> Rational {
        match self.segment_index(eta) {
            Some(i) => self.segments[i].eval(eta),
            None => Rational::from_integer(0.into()),
        }
    }
}

/// The n-fold iterated CDF of one distribution, n >= 2.
#[derive(Debug, Clone)]
pub struct IteratedCdf {
    order: u32,
    pp: PiecewisePoly,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum DominanceError {
    #[error("iterated CDF needs order >= 2, got {order}")]
    OrderTooSmall { order: u32 },
    #[error("support [{min}, {max}] escapes the reference interval [{lo}, {hi}]")]
    SupportOutsideInterval {
        min: Rational,
        max: Rational,
        lo: Rational,
        hi: Rational,
    },
    #[error("moment-preservation degree {m} requires dominance order at least {} (got {n})", m + 1)]
    BadDegrees { n: u32, m: u32 },
}

impl IteratedCdf {
    pub fn new(d: &DiscreteDistribution, order: u32) -> Result<Self, DominanceError> {
        if order < 2 {
            return Err(DominanceError::OrderTooSmall { order });
        }
        let inv_fact = factorial(order - 1).recip();
        let mut breakpoints = Vec::with_capacity(d.atoms().len());
        let mut segments = Vec::with_capacity(d.atoms().len());
        let mut prefix = Polynomial::zero();
        for atom in d.atoms() {
            let term = Polynomial::binomial_power(&atom.x, order - 1).scale(&(&atom.p * &inv_fact));
            prefix = &prefix + &term;
            breakpoints.push(atom.x.clone());
            segments.push(prefix.clone());
        }
        Ok(IteratedCdf {
            order,
            pp: PiecewisePoly::new(breakpoints, segments),
        })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn piecewise(&self) -> &PiecewisePoly {
        &self.pp
    }

    pub fn eval(&self, eta: &Rational) -> Rational {
        self.pp.eval(eta)
    }
}

/// Value of the order-n iterated CDF at one point, by the closed form:
/// the CDF itself for n = 1, and `E[(eta - X)_+^(n-1)] / (n-1)!` for
/// n >= 2. Independent of the segment construction; the two routes must
/// agree exactly.
pub fn iterated_cdf_at(d: &DiscreteDistribution, order: u32, eta: &Rational) -> Rational {
    assert!(order >= 1, "iterated CDF order must be positive");
    if order == 1 {
        d.cdf(eta)
    } else {
        d.lower_partial_moment(eta, order - 1) * factorial(order - 1).recip()
    }
}

/// The difference `D(eta) = F_Y^[n](eta) - F_X^[n](eta)` over the merged
/// breakpoints of both supports, for n >= 2. The dominance order X >= Y
/// holds on a region exactly when D is nonnegative there.
pub fn difference_pp(
    x: &DiscreteDistribution,
    y: &DiscreteDistribution,
    order: u32,
) -> Result<PiecewisePoly, DominanceError> {
    let fx = IteratedCdf::new(x, order)?;
    let fy = IteratedCdf::new(y, order)?;
    let mut merged: Vec<Rational> = Vec::new();
    let mut ix = fx.pp.breakpoints().iter().peekable();
    let mut iy = fy.pp.breakpoints().iter().peekable();
    while let (Some(&a), Some(&b)) = (ix.peek(), iy.peek()) {
        match a.cmp(b) {
            std::cmp::Ordering::Less => merged.push(ix.next().unwrap().clone()),
            std::cmp::Ordering::Greater => merged.push(iy.next().unwrap().clone()),
            std::cmp::Ordering::Equal => {
                merged.push(ix.next().unwrap().clone());
                iy.next();
            }
        }
    }
    merged.extend(ix.cloned());
    merged.extend(iy.cloned());

    let zero = Polynomial::zero();
    let segments = merged
        .iter()
        .map(|t| {
            let px = fx
                .pp
                .segment_index(t)
                .map_or(&zero, |i| &fx.pp.segments()[i]);
            let py = fy
                .pp
                .segment_index(t)
                .map_or(&zero, |i| &fy.pp.segments()[i]);
            py - px
        })
        .collect();
    Ok(PiecewisePoly::new(merged, segments))
}
