//! Exact sign analysis of polynomials over intervals.
//!
//! Root counting uses Sturm chains of the square-free part, so multiple
//! roots are counted once and endpoint evaluation stays well defined even
//! when an endpoint is itself a root. Nonnegativity is decided by
//! isolating the distinct roots and sampling the root-free pieces; a
//! failure always comes back with a rational point where the polynomial
//! is strictly negative.

use super::interval::RealInterval;
use super::polynomial::Polynomial;
use super::rational::{rat_int, Rational};
use num_traits::{Signed, Zero};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("the zero polynomial has no root count")]
    ZeroPolynomial,
}

/// Outcome of a nonnegativity check. A negative outcome carries a point
/// of the queried interval together with the (strictly negative) value
/// there, so callers can re-verify the refutation independently.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NonnegOutcome {
    Nonnegative,
    Negative { witness: Rational, value: Rational },
}

impl NonnegOutcome {
    pub fn is_nonnegative(&self) -> bool {
        matches!(self, NonnegOutcome::Nonnegative)
    }
}

/// Strict upper bound on the absolute value of every root:
/// `1 + max |c_i / c_deg|`. Requires degree >= 1.
pub fn cauchy_root_bound(p: &Polynomial) -> Rational {
    let deg = p.degree().expect("root bound of zero polynomial");
    assert!(deg >= 1, "root bound of constant polynomial");
    let lead = p.leading().unwrap();
    let mut max = Rational::zero();
    for c in &p.coeffs()[..deg] {
        let ratio = (c / lead).abs();
        if ratio > max {
            max = ratio;
        }
    }
    max + rat_int(1)
}

/// Sturm chain of a square-free polynomial, each element reduced to its
/// primitive integer form (a positive rescaling, so all signs survive).
struct SturmChain {
    chain: Vec<Polynomial>,
}

impl SturmChain {
    fn new(square_free: &Polynomial) -> Self {
        let mut chain = vec![square_free.primitive()];
        let deriv = square_free.derivative().primitive();
        if !deriv.is_zero() {
            chain.push(deriv);
        }
        while chain.len() >= 2 {
            let (_, rem) = chain[chain.len() - 2].divrem(&chain[chain.len() - 1]);
            if rem.is_zero() {
                break;
            }
            chain.push((-&rem).primitive());
        }
        SturmChain { chain }
    }

    fn variations(&self, x: &Rational) -> usize {
        let mut count = 0;
        let mut prev: Option<bool> = None;
        for p in &self.chain {
            let v = p.eval(x);
            if v.is_zero() {
                continue;
            }
            let neg = v.is_negative();
            if prev.is_some_and(|s| s != neg) {
                count += 1;
            }
            prev = Some(neg);
        }
        count
    }

    /// Distinct roots in `(lo, hi]`; valid for any `lo <= hi`, including
    /// endpoints that are roots.
    fn count_half_open(&self, lo: &Rational, hi: &Rational) -> usize {
        debug_assert!(lo <= hi);
        let at_lo = self.variations(lo);
        let at_hi = self.variations(hi);
        debug_assert!(at_lo >= at_hi);
        at_lo - at_hi
    }

    fn count_open(&self, lo: &Rational, hi: &Rational) -> usize {
        let half_open = self.count_half_open(lo, hi);
        let hi_is_root = self.chain[0].eval(hi).is_zero();
        half_open - usize::from(hi_is_root)
    }
}

/// Number of distinct real roots of `p` in the half-open interval
/// `(lo, hi]`. Infinite endpoints are replaced by the Cauchy bound, which
/// encloses every real root.
pub fn count_real_roots(p: &Polynomial, iv: &RealInterval) -> Result<usize, PolyError> {
    if p.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    if p.degree() == Some(0) {
        return Ok(0);
    }
    let q = p.square_free_part();
    let bound = cauchy_root_bound(&q);
    let hi = match iv.hi() {
        Some(h) => h.clone(),
        // every root is below the bound, but keep lo <= hi for ranges
        // that start beyond it
        None => match iv.lo() {
            Some(l) if *l > bound => l.clone(),
            _ => bound.clone(),
        },
    };
    let lo = match iv.lo() {
        Some(l) => l.clone(),
        None => std::cmp::min(-&bound, hi.clone()),
    };
    Ok(SturmChain::new(&q).count_half_open(&lo, &hi))
}

fn sign_at(value: &Rational) -> i8 {
    if value.is_zero() {
        0
    } else if value.is_negative() {
        -1
    } else {
        1
    }
}

/// Sign of `p` immediately to the right of `c`, read off the lowest-order
/// nonvanishing derivative at `c`.
fn sign_just_right(p: &Polynomial, c: &Rational) -> i8 {
    let mut d = p.clone();
    loop {
        let v = d.eval(c);
        if !v.is_zero() {
            return sign_at(&v);
        }
        d = d.derivative();
        assert!(!d.is_zero(), "sign query on zero polynomial");
    }
}

/// Sign of `p` immediately to the left of `c`.
fn sign_just_left(p: &Polynomial, c: &Rational) -> i8 {
    let mut d = p.clone();
    let mut order = 0u32;
    loop {
        let v = d.eval(c);
        if !v.is_zero() {
            let s = sign_at(&v);
            return if order % 2 == 0 { s } else { -s };
        }
        d = d.derivative();
        order += 1;
        assert!(!d.is_zero(), "sign query on zero polynomial");
    }
}

/// Walks from `from` toward `toward` in halving steps until the strictly
/// negative region adjacent to `from` is hit.
fn refine_witness(p: &Polynomial, from: &Rational, toward: &Rational) -> (Rational, Rational) {
    let mut step = (toward - from) / rat_int(2);
    for _ in 0..10_000 {
        let x = from + &step;
        let v = p.eval(&x);
        if v.is_negative() {
            return (x, v);
        }
        step = step / rat_int(2);
    }
    unreachable!("sign change vanished during witness refinement");
}

struct NonnegChecker<'a> {
    p: &'a Polynomial,
    chain: SturmChain,
}

impl NonnegChecker<'_> {
    /// Decides `p >= 0` on `[lo, hi]` given `p(lo) >= 0` and `p(hi) >= 0`.
    fn check(&self, lo: &Rational, hi: &Rational) -> Result<(), (Rational, Rational)> {
        if lo == hi {
            return Ok(());
        }
        match self.chain.count_open(lo, hi) {
            // sign is constant on the open interval
            0 => {
                let mid = (lo + hi) / rat_int(2);
                let v = self.p.eval(&mid);
                if v.is_negative() {
                    Err((mid, v))
                } else {
                    Ok(())
                }
            }
            // a single interior root cannot flip the sign when the
            // polynomial is positive just inside both endpoints
            1 => {
                let right_of_lo = if self.p.eval(lo).is_zero() {
                    sign_just_right(self.p, lo)
                } else {
                    1
                };
                if right_of_lo < 0 {
                    return Err(refine_witness(self.p, lo, hi));
                }
                let left_of_hi = if self.p.eval(hi).is_zero() {
                    sign_just_left(self.p, hi)
                } else {
                    1
                };
                if left_of_hi < 0 {
                    return Err(refine_witness(self.p, hi, lo));
                }
                Ok(())
            }
            _ => {
                let mid = (lo + hi) / rat_int(2);
                let v = self.p.eval(&mid);
                if v.is_negative() {
                    return Err((mid, v));
                }
                self.check(lo, &mid)?;
                self.check(&mid, hi)
            }
        }
    }
}

/// Decides whether `p(x) >= 0` for every `x` in `iv`, endpoints included.
/// Unbounded sides are settled by the leading-coefficient sign beyond the
/// Cauchy bound; the finite remainder is settled by root isolation.
pub fn is_nonnegative_on(p: &Polynomial, iv: &RealInterval) -> NonnegOutcome {
    if p.is_zero() {
        return NonnegOutcome::Nonnegative;
    }
    if p.degree() == Some(0) {
        let c = p.leading().unwrap();
        if c.is_negative() {
            let witness = iv.lo().or(iv.hi()).cloned().unwrap_or_else(Rational::zero);
            return NonnegOutcome::Negative {
                witness,
                value: c.clone(),
            };
        }
        return NonnegOutcome::Nonnegative;
    }

    let deg = p.degree().unwrap();
    let lead_sign = sign_at(p.leading().unwrap());
    let q = p.square_free_part();
    let bound = cauchy_root_bound(&q);

    if iv.hi().is_none() && lead_sign < 0 {
        let base = iv
            .lo()
            .map_or(bound.clone(), |l| std::cmp::max(l.clone(), bound.clone()));
        let witness = base + rat_int(1);
        let value = p.eval(&witness);
        debug_assert!(value.is_negative());
        return NonnegOutcome::Negative { witness, value };
    }
    if iv.lo().is_none() {
        let head_sign = if deg % 2 == 0 { lead_sign } else { -lead_sign };
        if head_sign < 0 {
            let base = iv
                .hi()
                .map_or(-&bound, |h| std::cmp::min(h.clone(), -&bound));
            let witness = base - rat_int(1);
            let value = p.eval(&witness);
            debug_assert!(value.is_negative());
            return NonnegOutcome::Negative { witness, value };
        }
    }

    // both unbounded tails (if any) are nonnegative; reduce to a finite
    // closed interval that covers everything up to the root bound
    let lo = match iv.lo() {
        Some(l) => l.clone(),
        None => {
            let below = -&bound - rat_int(1);
            iv.hi()
                .map_or(below.clone(), |h| std::cmp::min(below, h.clone()))
        }
    };
    let hi = match iv.hi() {
        Some(h) => h.clone(),
        None => std::cmp::max(&bound + rat_int(1), lo.clone()),
    };

    let at_lo = p.eval(&lo);
    if at_lo.is_negative() {
        return NonnegOutcome::Negative {
            witness: lo,
            value: at_lo,
        };
    }
    let at_hi = p.eval(&hi);
    if at_hi.is_negative() {
        return NonnegOutcome::Negative {
            witness: hi,
            value: at_hi,
        };
    }

    let checker = NonnegChecker {
        p,
        chain: SturmChain::new(&q),
    };
    match checker.check(&lo, &hi) {
        Ok(()) => NonnegOutcome::Nonnegative,
        Err((witness, value)) => {
            debug_assert!(value.is_negative());
            debug_assert!(iv.contains(&witness));
            NonnegOutcome::Negative { witness, value }
        }
    }
}
