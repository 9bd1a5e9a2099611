//! Dominance decision procedures and their typed verdicts.

use super::piecewise::{difference_pp, DominanceError, PiecewisePoly};
use crate::dist::DiscreteDistribution;
use crate::exactalg::{is_nonnegative_on, NonnegOutcome, Rational, RealInterval};
use num_traits::Zero;

/// A failed check carries a re-checkable reason.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// The iterated-CDF difference `F_Y^[n] - F_X^[n]` is `gap < 0` at
    /// `eta`.
    PointwiseViolation { eta: Rational, gap: Rational },
    /// Boundary condition of order `k` at the right endpoint `b` fails:
    /// `lhs = E[(b-X)^(k-1)]` exceeds `rhs = E[(b-Y)^(k-1)]`.
    BoundaryViolation {
        k: u32,
        lhs: Rational,
        rhs: Rational,
    },
    /// A moment that must match does not. For checks over the real line
    /// `k` indexes raw moments (`lhs = E[X^k]`); for reference-interval
    /// checks it indexes boundary conditions (`lhs = E[(b-X)^(k-1)]`).
    MomentMismatch {
        k: u32,
        lhs: Rational,
        rhs: Rational,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    witness: Option<Witness>,
}

impl Verdict {
    pub fn pass() -> Self {
        Verdict { witness: None }
    }

    pub fn fail(witness: Witness) -> Self {
        Verdict {
            witness: Some(witness),
        }
    }

    pub fn holds(&self) -> bool {
        self.witness.is_none()
    }

    pub fn witness(&self) -> Option<&Witness> {
        self.witness.as_ref()
    }
}

/// First-order comparison: `F_X <= F_Y` at every merged support point
/// settles the step functions everywhere.
fn check_fsd(x: &DiscreteDistribution, y: &DiscreteDistribution) -> Verdict {
    let mut points: Vec<&Rational> = x
        .atoms()
        .iter()
        .chain(y.atoms().iter())
        .map(|a| &a.x)
        .collect();
    points.sort();
    points.dedup();
    for t in points {
        let gap = y.cdf(t) - x.cdf(t);
        if gap < Rational::zero() {
            return Verdict::fail(Witness::PointwiseViolation {
                eta: t.clone(),
                gap,
            });
        }
    }
    Verdict::pass()
}

/// Scans the difference segments left to right; `upper` clips the final
/// reach (the tail runs to +inf without it). Returns the first point
/// where the difference goes negative.
fn first_negative(diff: &PiecewisePoly, upper: Option<&Rational>) -> Option<(Rational, Rational)> {
    let bps = diff.breakpoints();
    for (i, seg) in diff.segments().iter().enumerate() {
        let lo = bps[i].clone();
        let iv = if i + 1 < bps.len() {
            RealInterval::closed(lo, bps[i + 1].clone())
        } else {
            match upper {
                Some(b) => RealInterval::closed(lo, b.clone()),
                None => RealInterval::at_least(lo),
            }
        };
        if let NonnegOutcome::Negative { witness, value } = is_nonnegative_on(seg, &iv) {
            return Some((witness, value));
        }
    }
    None
}

/// Decides n-th order stochastic dominance of `x` over `y` on the whole
/// real line: the n-fold iterated CDF of `x` must not exceed that of `y`
/// anywhere. `n` must be positive.
pub fn check_nsd_real(x: &DiscreteDistribution, y: &DiscreteDistribution, n: u32) -> Verdict {
    assert!(n >= 1, "dominance order must be positive");
    if n == 1 {
        return check_fsd(x, y);
    }
    let diff = difference_pp(x, y, n).expect("order checked above");
    match first_negative(&diff, None) {
        Some((eta, gap)) => Verdict::fail(Witness::PointwiseViolation { eta, gap }),
        None => Verdict::pass(),
    }
}

pub(crate) fn require_support_inside(
    x: &DiscreteDistribution,
    y: &DiscreteDistribution,
    a: &Rational,
    b: &Rational,
) -> Result<(), DominanceError> {
    let min = std::cmp::min(&x.support().min, &y.support().min);
    let max = std::cmp::max(&x.support().max, &y.support().max);
    if min < a || max > b {
        return Err(DominanceError::SupportOutsideInterval {
            min: min.clone(),
            max: max.clone(),
            lo: a.clone(),
            hi: b.clone(),
        });
    }
    Ok(())
}

/// Decides n-th order stochastic dominance relative to the reference
/// interval `[a, b]`: the pointwise iterated-CDF comparison on `[a, b]`
/// plus the boundary conditions `E[(b-X)^(k-1)] <= E[(b-Y)^(k-1)]` for
/// every order `k` in `1..=n`. Both supports must lie inside `[a, b]`.
pub fn check_nsd_interval(
    x: &DiscreteDistribution,
    y: &DiscreteDistribution,
    n: u32,
    a: &Rational,
    b: &Rational,
) -> Result<Verdict, DominanceError> {
    assert!(n >= 1, "dominance order must be positive");
    assert!(a < b, "reference interval must not be degenerate");
    require_support_inside(x, y, a, b)?;
    if n >= 2 {
        let diff = difference_pp(x, y, n)?;
        if let Some((eta, gap)) = first_negative(&diff, Some(b)) {
            return Ok(Verdict::fail(Witness::PointwiseViolation { eta, gap }));
        }
    } else {
        let v = check_fsd(x, y);
        if !v.holds() {
            return Ok(v);
        }
    }
    for k in 1..=n {
        let lhs = x.shifted_moment(b, k - 1);
        let rhs = y.shifted_moment(b, k - 1);
        if lhs > rhs {
            return Ok(Verdict::fail(Witness::BoundaryViolation { k, lhs, rhs }));
        }
    }
    Ok(Verdict::pass())
}

/// Dominance over the real line with the first `m` raw moments pinned
/// equal. Requires `m <= n - 1`.
pub fn check_nmsd_real(
    x: &DiscreteDistribution,
    y: &DiscreteDistribution,
    n: u32,
    m: u32,
) -> Result<Verdict, DominanceError> {
    if m > n.saturating_sub(1) {
        return Err(DominanceError::BadDegrees { n, m });
    }
    let verdict = check_nsd_real(x, y, n);
    if !verdict.holds() {
        return Ok(verdict);
    }
    for k in 1..=m {
        let lhs = x.raw_moment(k);
        let rhs = y.raw_moment(k);
        if lhs != rhs {
            return Ok(Verdict::fail(Witness::MomentMismatch { k, lhs, rhs }));
        }
    }
    Ok(Verdict::pass())
}

/// Reference-interval dominance with moment preservation: the interval
/// check plus equality of the boundary conditions of orders `1..=m+1`
/// (equivalently, of the first `m` raw moments). Requires `m <= n - 1`.
pub fn check_nmsd_interval(
    x: &DiscreteDistribution,
    y: &DiscreteDistribution,
    n: u32,
    m: u32,
    a: &Rational,
    b: &Rational,
) -> Result<Verdict, DominanceError> {
    if m > n.saturating_sub(1) {
        return Err(DominanceError::BadDegrees { n, m });
    }
    let verdict = check_nsd_interval(x, y, n, a, b)?;
    if !verdict.holds() {
        return Ok(verdict);
    }
    for k in 1..=m + 1 {
        let lhs = x.shifted_moment(b, k - 1);
        let rhs = y.shifted_moment(b, k - 1);
        if lhs != rhs {
            return Ok(Verdict::fail(Witness::MomentMismatch { k, lhs, rhs }));
        }
    }
    Ok(Verdict::pass())
}
