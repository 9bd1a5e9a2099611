//! Expected-utility counterpart of the dominance checks.
//!
//! Dominance of one distribution over another at order `n` is mirrored
//! by the ordering of expected utilities across a class of utility
//! functions whose derivatives alternate in sign up to order `n`. This
//! module hosts the finitely-representable members of those classes —
//! positive mixtures of singularity functions `-(eta - x)_+^(n-1)` plus
//! an increasing affine part, and rational-coefficient polynomials —
//! together with exact expected-utility evaluation and a seeded sampler
//! that hunts for an expected-utility violation of a claimed dominance.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dist::DiscreteDistribution;
use crate::dominance::DominanceError;
use crate::exactalg::{
    is_nonnegative_on, parse_rational, pow, rat, NonnegOutcome, ParseRationalError, Polynomial,
    Rational, RealInterval,
};
use num_traits::Zero;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum UtilityError {
    #[error("singularity utilities need order at least 2 (got {order})")]
    OrderTooSmall { order: u32 },
    #[error("mixture terms must share order {expected} (got {got})")]
    MixedOrders { expected: u32, got: u32 },
    #[error("mixture weights must be positive (got {weight})")]
    NonpositiveWeight { weight: Rational },
    #[error("the linear coefficient must be nonnegative (got {c1})")]
    NegativeSlope { c1: Rational },
}

/// The kinked utility `u(x) = -(eta - x)_+^(order-1)`: zero at and above
/// the threshold, polynomial below it. Orders start at 2; order 1 would
/// be a step function, which the first-order dominance check covers
/// directly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingularityUtility {
    eta: Rational,
    order: u32,
}

impl SingularityUtility {
    pub fn new(eta: Rational, order: u32) -> Result<Self, UtilityError> {
        if order < 2 {
            return Err(UtilityError::OrderTooSmall { order });
        }
        Ok(SingularityUtility { eta, order })
    }

    pub fn eta(&self) -> &Rational {
        &self.eta
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        if *x >= self.eta {
            Rational::zero()
        } else {
            -pow(&(&self.eta - x), self.order - 1)
        }
    }
}

/// A positive combination of singularity utilities of one common order,
/// plus an increasing affine part `c0 + c1*x`. Every mixture built here
/// lies in the utility class matching its order, so an expected-utility
/// reversal under a mixture refutes the corresponding dominance claim.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UtilityMixture {
    order: u32,
    terms: Vec<(Rational, SingularityUtility)>,
    c0: Rational,
    c1: Rational,
}

impl UtilityMixture {
    pub fn new(
        order: u32,
        terms: Vec<(Rational, SingularityUtility)>,
        c0: Rational,
        c1: Rational,
    ) -> Result<Self, UtilityError> {
        if order < 2 {
            return Err(UtilityError::OrderTooSmall { order });
        }
        for (weight, term) in &terms {
            if *weight <= Rational::zero() {
                return Err(UtilityError::NonpositiveWeight {
                    weight: weight.clone(),
                });
            }
            if term.order != order {
                return Err(UtilityError::MixedOrders {
                    expected: order,
                    got: term.order,
                });
            }
        }
        if c1 < Rational::zero() {
            return Err(UtilityError::NegativeSlope { c1 });
        }
        Ok(UtilityMixture {
            order,
            terms,
            c0,
            c1,
        })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn terms(&self) -> &[(Rational, SingularityUtility)] {
        &self.terms
    }

    pub fn affine_part(&self) -> (&Rational, &Rational) {
        (&self.c0, &self.c1)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut total = &self.c0 + &self.c1 * x;
        for (weight, term) in &self.terms {
            total += weight * term.eval(x);
        }
        total
    }
}

/// Exact expected utility of a mixture: `c0 + c1*E[X]` minus the
/// weighted lower partial moments at each threshold.
pub fn mixture_eu(d: &DiscreteDistribution, u: &UtilityMixture) -> Rational {
    let mut total = &u.c0 + &u.c1 * d.mean();
    for (weight, term) in &u.terms {
        total -= weight * d.lower_partial_moment(&term.eta, term.order - 1);
    }
    total
}

/// A candidate utility given as an explicit polynomial; class membership
/// is checked by [`is_utility_in_class`], never assumed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolynomialUtility {
    pub p: Polynomial,
}

/// Exact expected utility of a polynomial utility.
pub fn polynomial_eu(d: &DiscreteDistribution, u: &PolynomialUtility) -> Rational {
    d.atoms().iter().map(|a| &a.p * u.p.eval(&a.x)).sum()
}

/// Tests whether `(-1)^(k-1) * u^(k) >= 0` on the finite interval `iv`
/// for every derivative order `k` in `1..=n` — the sign pattern that
/// makes `u` an admissible utility for order-`n` dominance on `iv`.
pub fn is_utility_in_class(u: &PolynomialUtility, n: u32, iv: &RealInterval) -> bool {
    assert!(n >= 1, "dominance order must be positive");
    assert!(
        iv.lo().is_some() && iv.hi().is_some(),
        "class membership is checked on finite intervals"
    );
    let mut derivative = u.p.clone();
    for k in 1..=n {
        derivative = derivative.derivative();
        let signed = if k % 2 == 1 {
            derivative.clone()
        } else {
            -&derivative
        };
        if let NonnegOutcome::Negative { .. } = is_nonnegative_on(&signed, iv) {
            return false;
        }
        if derivative.is_zero() {
            break;
        }
    }
    true
}

/// Where utility thresholds are drawn from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Scope {
    /// Thresholds range over a widened hull of both supports, reaching
    /// below the smallest atom and well past the largest.
    Real,
    /// Thresholds stay inside the reference interval `[a, b]`; both
    /// supports must lie inside it.
    Interval { a: Rational, b: Rational },
}

/// Outcome of a seeded search for an expected-utility reversal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DualOutcome {
    /// No sampled mixture ordered the expected utilities against the
    /// claimed direction.
    Consistent,
    /// The first sampled mixture with `E[u(X)] < E[u(Y)]`, which refutes
    /// order-`n` dominance of X over Y on the sampled scope.
    Violation {
        utility: UtilityMixture,
        eu_x: Rational,
        eu_y: Rational,
    },
}

fn sample_rational_in(rng: &mut ChaCha8Rng, lo: &Rational, hi: &Rational) -> Rational {
    let t = rng.gen_range(0..=720i64);
    lo + (hi - lo) * rat(t, 720)
}

fn sample_mixture(
    rng: &mut ChaCha8Rng,
    order: u32,
    lo: &Rational,
    hi: &Rational,
) -> UtilityMixture {
    let count = rng.gen_range(1..=3usize);
    let mut terms = Vec::with_capacity(count);
    for _ in 0..count {
        let weight = rat(rng.gen_range(1..=8i64), rng.gen_range(1..=8i64));
        let eta = sample_rational_in(rng, lo, hi);
        terms.push((
            weight,
            SingularityUtility::new(eta, order).expect("order checked by caller"),
        ));
    }
    let c0 = rat(rng.gen_range(-4..=4i64), rng.gen_range(1..=4i64));
    let c1 = rat(rng.gen_range(0..=4i64), rng.gen_range(1..=4i64));
    UtilityMixture::new(order, terms, c0, c1).expect("sampled weights are positive")
}

/// Samples `trials` utility mixtures of the given order (thresholds
/// drawn per `scope`) and compares exact expected utilities. Returns the
/// first mixture that orders them against X, or `Consistent` if none
/// does. Sampling is deterministic in `(seed, trial index)`, so runs
/// reproduce exactly.
pub fn dual_consistency_check(
    x: &DiscreteDistribution,
    y: &DiscreteDistribution,
    n: u32,
    scope: &Scope,
    trials: u32,
    seed: u64,
) -> Result<DualOutcome, DominanceError> {
    if n < 2 {
        return Err(DominanceError::OrderTooSmall { order: n });
    }
    let (lo, hi) = match scope {
        Scope::Real => {
            let min = std::cmp::min(&x.support().min, &y.support().min).clone();
            let max = std::cmp::max(&x.support().max, &y.support().max).clone();
            let mut range = &max - &min;
            if range.is_zero() {
                range = rat(1, 1);
            }
            (&min - &range, max + rat(2, 1) * range)
        }
        Scope::Interval { a, b } => {
            assert!(a < b, "reference interval must not be degenerate");
            crate::dominance::require_support_inside(x, y, a, b)?;
            (a.clone(), b.clone())
        }
    };
    for trial in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial as u64);
        let utility = sample_mixture(&mut rng, n, &lo, &hi);
        let eu_x = mixture_eu(x, &utility);
        let eu_y = mixture_eu(y, &utility);
        if eu_x < eu_y {
            return Ok(DualOutcome::Violation {
                utility,
                eu_x,
                eu_y,
            });
        }
    }
    Ok(DualOutcome::Consistent)
}

/// On-disk form of a [`UtilityMixture`]; rationals travel as strings.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MixtureFile {
    order: u32,
    #[serde(default)]
    affine: Option<AffineRecord>,
    #[serde(default)]
    terms: Vec<TermRecord>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AffineRecord {
    c0: String,
    c1: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermRecord {
    weight: String,
    eta: String,
}

#[derive(Debug, thiserror::Error)]
pub enum MixtureFileError {
    #[error("malformed mixture JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("field {field:?} is not a rational: {source}")]
    BadRational {
        field: &'static str,
        source: ParseRationalError,
    },
    #[error(transparent)]
    Utility(#[from] UtilityError),
}

pub fn mixture_from_json(text: &str) -> Result<UtilityMixture, MixtureFileError> {
    let parse = |field: &'static str, text: &str| -> Result<Rational, MixtureFileError> {
        parse_rational(text).map_err(|source| MixtureFileError::BadRational { field, source })
    };
    let file: MixtureFile = serde_json::from_str(text)?;
    let (c0, c1) = match &file.affine {
        Some(affine) => (parse("c0", &affine.c0)?, parse("c1", &affine.c1)?),
        None => (Rational::zero(), Rational::zero()),
    };
    let mut terms = Vec::with_capacity(file.terms.len());
    for record in &file.terms {
        let weight = parse("weight", &record.weight)?;
        let eta = parse("eta", &record.eta)?;
        terms.push((weight, SingularityUtility::new(eta, file.order)?));
    }
    Ok(UtilityMixture::new(file.order, terms, c0, c1)?)
}

pub fn mixture_to_json(u: &UtilityMixture) -> String {
    let file = MixtureFile {
        order: u.order,
        affine: Some(AffineRecord {
            c0: u.c0.to_string(),
            c1: u.c1.to_string(),
        }),
        terms: u
            .terms
            .iter()
            .map(|(weight, term)| TermRecord {
                weight: weight.to_string(),
                eta: term.eta.to_string(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&file).expect("mixture serialization cannot fail")
}
