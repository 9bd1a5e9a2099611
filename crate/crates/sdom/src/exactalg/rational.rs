//! Exact rational scalars and their text form.
//!
//! Every quantity in this crate is a `Rational`: arbitrary-precision,
//! always in lowest terms with a positive denominator. The text form is
//! `"num/den"` (`"num"` when the denominator is 1), which is also what all
//! JSON interchange uses, so values survive serialization bit-exactly.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::str::FromStr;

pub type Rational = num_rational::BigRational;

/// Builds `n/d` from machine integers. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Builds the integer rational `n`.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `r^k` with `r^0 = 1`.
pub fn pow(r: &Rational, k: u32) -> Rational {
    if k == 0 {
        return Rational::one();
    }
    Rational::new(r.numer().pow(k), r.denom().pow(k))
}

/// `k!` as a rational.
pub fn factorial(k: u32) -> Rational {
    let mut acc = BigInt::one();
    for i in 2..=k {
        acc *= BigInt::from(i);
    }
    Rational::from_integer(acc)
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("not a rational number: {input:?}")]
pub struct ParseRationalError {
    pub input: String,
}

/// Parses `"num/den"` or `"num"`, with an optional leading `-`.
/// Rejects zero denominators and anything else `BigRational` cannot read.
pub fn parse_rational(s: &str) -> Result<Rational, ParseRationalError> {
    let t = s.trim();
    if t.is_empty() {
        return Err(ParseRationalError {
            input: s.to_string(),
        });
    }
    Rational::from_str(t).map_err(|_| ParseRationalError {
        input: s.to_string(),
    })
}

/// Renders `r` rounded half-away-from-zero to `digits` decimal places.
/// Used only for display annotations; never feeds back into arithmetic.
pub fn decimal_approx(r: &Rational, digits: u32) -> String {
    let scale = BigInt::from(10u32).pow(digits);
    let scaled = (r.numer() * &scale).abs();
    let den = r.denom().clone();
    let q = (scaled * 2u32 + &den) / (den * 2u32);
    let int_part = &q / &scale;
    let frac_part = &q % &scale;
    let sign = if r.is_negative() && !q.is_zero() {
        "-"
    } else {
        ""
    };
    if digits == 0 {
        format!("{sign}{int_part}")
    } else {
        format!(
            "{sign}{int_part}.{frac_part:0>width$}",
            width = digits as usize
        )
    }
}
