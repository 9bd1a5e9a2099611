//! Generators for the counterexample families: pairs of distributions
//! engineered so that dominance over the whole real line and dominance
//! relative to a bounded reference interval disagree.
//!
//! Every generator returns a [`ConstructedPair`] carrying the exact
//! parameters that produced it, so any output can be rebuilt bit-for-bit
//! from its params sidecar.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::dist::DiscreteDistribution;
use crate::dominance::{check_nsd_interval, check_nsd_real};
use crate::exactalg::{rat, rat_int, Rational};

/// A generated pair of distributions together with the exact parameters
/// that produced it. The distributions can be rebuilt from `family` plus
/// `params` alone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstructedPair {
    pub x: DiscreteDistribution,
    pub y: DiscreteDistribution,
    pub family: Family,
    pub params: BTreeMap<String, Rational>,
}

/// Which generator produced a pair. Scaling steps wrap the family they
/// were applied to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Family {
    Example1,
    Lemma,
    Rescaled {
        base: Box<Family>,
    },
    GammaScaled {
        base: Box<Family>,
    },
    /// Drawn by the experiment harness rather than a closed-form
    /// generator; the params record the seed and streams to replay it
    /// under the originating experiment config.
    Sampled,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Example1 => write!(f, "example1"),
            Family::Lemma => write!(f, "lemma"),
            Family::Rescaled { base } => write!(f, "rescale({base})"),
            Family::GammaScaled { base } => write!(f, "gamma({base})"),
            Family::Sampled => write!(f, "sampled"),
        }
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ConstructError {
    #[error("eps must lie strictly between 0 and 1/9 (got {eps})")]
    EpsilonOutOfRange { eps: Rational },
    #[error("m must lie strictly between 0 and 1 (got {m})")]
    MOutOfRange { m: Rational },
    #[error("rescale endpoints must satisfy a < b and c < d")]
    BadIntervals,
    #[error("supports span [{min}, {max}], escaping the source interval [{lo}, {hi}]")]
    SupportOutsideInterval {
        min: Rational,
        max: Rational,
        lo: Rational,
        hi: Rational,
    },
    #[error("second-moment gap over mean gap is {ratio}, below the required {threshold}")]
    RatioTooSmall {
        ratio: Rational,
        threshold: Rational,
    },
    #[error("gamma scaling needs E[X] > E[Y] (got {ex} vs {ey})")]
    MeansNotOrdered { ex: Rational, ey: Rational },
}

/// Two-atom pair that holds fourth-order dominance over the real line
/// yet fails it relative to the tight interval `[0, 1]` that carries its
/// support: X puts mass `8/9 + eps` at `2/9` and the rest at `1`, while
/// Y puts mass `1/3` at `0` and `2/3` at `4/9`. Requires `0 < eps < 1/9`
/// so both probabilities stay positive.
pub fn example_counter_pair(eps: Rational) -> Result<ConstructedPair, ConstructError> {
    if eps <= Rational::zero() || eps >= rat(1, 9) {
        return Err(ConstructError::EpsilonOutOfRange { eps });
    }
    let x = DiscreteDistribution::from_pairs([
        (rat(2, 9), rat(8, 9) + &eps),
        (rat_int(1), rat(1, 9) - &eps),
    ])
    .expect("probabilities are positive and sum to one");
    let y = DiscreteDistribution::from_pairs([(rat_int(0), rat(1, 3)), (rat(4, 9), rat(2, 3))])
        .expect("probabilities are positive and sum to one");
    let mut params = BTreeMap::new();
    params.insert("eps".to_owned(), eps);
    Ok(ConstructedPair {
        x,
        y,
        family: Family::Example1,
        params,
    })
}

/// Two-atom pair on `[0, 9]` whose mean gap `5·eps·m` vanishes linearly
/// in `m` while its second-moment gap stays bounded away from zero: X
/// puts mass `8/9 + eps` at `2` and the rest at `8 + m`, with
/// `eps = m / (54(1 + m))`; Y puts mass `1/3` at `0` and `2/3` at `4`.
/// Requires `0 < m < 1`.
pub fn lemma_sequence_pair(m: Rational) -> Result<ConstructedPair, ConstructError> {
    if m <= Rational::zero() || m >= Rational::one() {
        return Err(ConstructError::MOutOfRange { m });
    }
    let eps = &m / (rat_int(54) * (Rational::one() + &m));
    let x = DiscreteDistribution::from_pairs([
        (rat_int(2), rat(8, 9) + &eps),
        (rat_int(8) + &m, rat(1, 9) - &eps),
    ])
    .expect("probabilities are positive and sum to one");
    let y = DiscreteDistribution::from_pairs([(rat_int(0), rat(1, 3)), (rat_int(4), rat(2, 3))])
        .expect("probabilities are positive and sum to one");
    let mut params = BTreeMap::new();
    params.insert("m".to_owned(), m);
    params.insert("eps".to_owned(), eps);
    Ok(ConstructedPair {
        x,
        y,
        family: Family::Lemma,
        params,
    })
}

/// Ratio of the second-moment gap to the mean gap of
/// [`lemma_sequence_pair`]`(m)`, by its closed form. The returned value
/// grows without bound as `m` shrinks, which is what makes the family
/// useful as raw material for [`gamma_scaled_pair`].
pub fn lemma_ratio(m: Rational) -> Result<Rational, ConstructError> {
    if m <= Rational::zero() || m >= Rational::one() {
        return Err(ConstructError::MOutOfRange { m });
    }
    let eps = &m / (rat_int(54) * (Rational::one() + &m));
    let m_over_eps = &m / &eps;
    let numerator = rat_int(16) * &m_over_eps - rat_int(540) - rat_int(9) * &m * &m
        + &m * &m / &eps
        - rat_int(144) * &m;
    Ok(numerator / (rat_int(45) * &m))
}

/// Affinely maps a pair from the interval `[a, b]` onto `[c, d]`. With
/// the positive scale `lambda = (d-c)/(b-a)` this preserves every
/// dominance verdict over the real line and multiplies the order-k
/// boundary gap at the right endpoint by `lambda^(k-1)`. Consecutive
/// rescales compose into a single recorded affine map.
pub fn rescale_pair(
    pair: ConstructedPair,
    a: &Rational,
    b: &Rational,
    c: &Rational,
    d: &Rational,
) -> Result<ConstructedPair, ConstructError> {
    if a >= b || c >= d {
        return Err(ConstructError::BadIntervals);
    }
    let min = std::cmp::min(&pair.x.support().min, &pair.y.support().min);
    let max = std::cmp::max(&pair.x.support().max, &pair.y.support().max);
    if min < a || max > b {
        return Err(ConstructError::SupportOutsideInterval {
            min: min.clone(),
            max: max.clone(),
            lo: a.clone(),
            hi: b.clone(),
        });
    }
    let lambda = (d - c) / (b - a);
    let shift = (b * c - a * d) / (b - a);
    let x = pair.x.affine(&lambda, &shift).expect("scale is positive");
    let y = pair.y.affine(&lambda, &shift).expect("scale is positive");
    let mut params = pair.params;
    let composed = match (params.get("lambda"), params.get("shift")) {
        (Some(l0), Some(s0)) => (&lambda * l0, &lambda * s0 + &shift),
        _ => (lambda.clone(), shift.clone()),
    };
    params.insert("lambda".to_owned(), composed.0);
    params.insert("shift".to_owned(), composed.1);
    let family = match pair.family {
        Family::Rescaled { base } => Family::Rescaled { base },
        other => Family::Rescaled {
            base: Box::new(other),
        },
    };
    Ok(ConstructedPair {
        x,
        y,
        family,
        params,
    })
}

/// Core of the gamma scaling: multiplies both distributions by
/// `gamma = 2d / ratio`, where `ratio` is the second-moment gap over the
/// mean gap. The choice pins the order-3 boundary comparison to exact
/// equality at `d` while leaving it strictly violated at any `c < d`.
fn gamma_scale_parts(
    x: &DiscreteDistribution,
    y: &DiscreteDistribution,
    c: &Rational,
    d: &Rational,
) -> Result<(DiscreteDistribution, DiscreteDistribution, Rational), ConstructError> {
    assert!(c < d, "target endpoints out of order");
    assert!(*d > Rational::zero(), "right endpoint must be positive");
    let zero = Rational::zero();
    assert!(
        x.support().min >= zero && y.support().min >= zero,
        "gamma scaling requires nonnegative supports"
    );
    let ex = x.mean();
    let ey = y.mean();
    if ex <= ey {
        return Err(ConstructError::MeansNotOrdered { ex, ey });
    }
    let ratio = (x.raw_moment(2) - y.raw_moment(2)) / (&ex - &ey);
    let threshold = rat_int(2) * d;
    if ratio < threshold {
        return Err(ConstructError::RatioTooSmall { ratio, threshold });
    }
    let gamma = threshold / &ratio;
    let xs = x.affine(&gamma, &zero).expect("scale is positive");
    let ys = y.affine(&gamma, &zero).expect("scale is positive");
    assert!(xs.shifted_moment(c, 2) > ys.shifted_moment(c, 2));
    assert!(xs.shifted_moment(d, 2) <= ys.shifted_moment(d, 2));
    Ok((xs, ys, gamma))
}

/// Scales a pair with ordered means by `gamma = 2d / ratio` so that the
/// order-3 boundary condition holds with equality at `d` but fails
/// strictly at every `c < d`. Requires `E[X] > E[Y]`, nonnegative
/// supports, and a second-moment-gap-to-mean-gap ratio of at least `2d`.
pub fn gamma_scaled_pair(
    pair: ConstructedPair,
    c: &Rational,
    d: &Rational,
) -> Result<ConstructedPair, ConstructError> {
    let (x, y, gamma) = gamma_scale_parts(&pair.x, &pair.y, c, d)?;
    let mut params = pair.params;
    params.insert("gamma".to_owned(), gamma);
    Ok(ConstructedPair {
        x,
        y,
        family: Family::GammaScaled {
            base: Box::new(pair.family),
        },
        params,
    })
}

/// Searches downward over `m` (halving from `m0`) until the gamma-scaled
/// pair fails fourth-order dominance relative to `[0, c]` yet holds it
/// relative to `[0, d]`, using the interval checks themselves as the
/// acceptance oracle. The ratio grows without bound as `m` shrinks, so
/// the first few candidates succeed in practice; the parameter actually
/// used is recorded under `"m"` in the result's params.
pub fn gamma_counterexample(c: &Rational, d: &Rational, m0: Rational) -> ConstructedPair {
    assert!(*c > Rational::zero() && c < d, "need 0 < c < d");
    let zero = Rational::zero();
    let mut m = m0;
    for _ in 0..200 {
        if let Ok(base) = lemma_sequence_pair(m.clone()) {
            if check_nsd_real(&base.x, &base.y, 4).holds() {
                if let Ok(scaled) = gamma_scaled_pair(base, c, d) {
                    let tight = check_nsd_interval(&scaled.x, &scaled.y, 4, &zero, c);
                    let wide = check_nsd_interval(&scaled.x, &scaled.y, 4, &zero, d);
                    let splits = matches!(&tight, Ok(v) if !v.holds())
                        && matches!(&wide, Ok(v) if v.holds());
                    if splits {
                        return scaled;
                    }
                }
            }
        }
        m = m / rat_int(2);
    }
    panic!("no pair separating [0, {c}] from [0, {d}] found at or above m = {m}");
}
