//! Univariate polynomials with exact rational coefficients.

use super::rational::{pow, rat_int, Rational};
use num_traits::{One, Signed, Zero};
use std::ops::{Add, Mul, Neg, Sub};

/// Coefficients in ascending degree order. Canonical form never stores
/// trailing zero coefficients, so the zero polynomial has no coefficients
/// and every other polynomial has a nonzero leading coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    coeffs: Vec<Rational>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Polynomial::from_coeffs(vec![c])
    }

    /// Builds from ascending coefficients, dropping trailing zeros.
    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    /// `c * x^k`.
    pub fn monomial(c: Rational, k: usize) -> Self {
        if c.is_zero() {
            return Polynomial::zero();
        }
        let mut coeffs = vec![Rational::zero(); k + 1];
        coeffs[k] = c;
        Polynomial { coeffs }
    }

    /// `(x - c)^k` expanded via the binomial theorem.
    pub fn binomial_power(c: &Rational, k: u32) -> Self {
        let mut coeffs = vec![Rational::zero(); k as usize + 1];
        let mut binom = Rational::one();
        // coefficient of x^t is C(k, t) * (-c)^(k-t)
        for t in 0..=k {
            coeffs[t as usize] = &binom * pow(&-c.clone(), k - t);
            if t < k {
                binom = binom * rat_int((k - t) as i64) / rat_int((t + 1) as i64);
            }
        }
        Polynomial::from_coeffs(coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> Polynomial {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * rat_int(i as i64))
            .collect();
        Polynomial::from_coeffs(coeffs)
    }

    pub fn nth_derivative(&self, k: u32) -> Polynomial {
        let mut p = self.clone();
        for _ in 0..k {
            if p.is_zero() {
                break;
            }
            p = p.derivative();
        }
        p
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Euclidean division: `self = q * div + r` with `deg r < deg div`.
    /// Panics if `div` is zero.
    pub fn divrem(&self, div: &Polynomial) -> (Polynomial, Polynomial) {
        assert!(!div.is_zero(), "division by zero polynomial");
        let dd = div.degree().unwrap();
        let lead = div.leading().unwrap();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rational::zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd {
            let k = rem.len() - 1 - dd;
            let factor = rem.last().unwrap() / lead;
            if !factor.is_zero() {
                for (i, c) in div.coeffs.iter().enumerate() {
                    let t = c * &factor;
                    rem[k + i] = &rem[k + i] - t;
                }
                quot[k] = factor;
            }
            rem.pop();
            while rem.last().is_some_and(Zero::is_zero) {
                rem.pop();
            }
        }
        (Polynomial::from_coeffs(quot), Polynomial { coeffs: rem })
    }

    /// Division known to be exact; panics on a nonzero remainder.
    pub fn exact_div(&self, div: &Polynomial) -> Polynomial {
        let (q, r) = self.divrem(div);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Positive scalar multiple with integer, collectively coprime
    /// coefficients and unchanged sign everywhere. Zero stays zero.
    pub fn primitive(&self) -> Polynomial {
        if self.is_zero() {
            return Polynomial::zero();
        }
        let mut den_lcm = num_bigint::BigInt::one();
        for c in &self.coeffs {
            den_lcm = num_integer::lcm(den_lcm, c.denom().clone());
        }
        let mut num_gcd = num_bigint::BigInt::zero();
        for c in &self.coeffs {
            let scaled = c.numer() * (&den_lcm / c.denom());
            num_gcd = num_integer::gcd(num_gcd, scaled);
        }
        let factor = Rational::new(den_lcm, num_gcd);
        self.scale(&factor.abs())
    }

    /// Monic greatest common divisor; zero if both inputs are zero.
    pub fn gcd(&self, other: &Polynomial) -> Polynomial {
        let mut a = self.primitive();
        let mut b = other.primitive();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r.primitive();
        }
        match a.leading() {
            Some(lead) => a.scale(&lead.recip()),
            None => a,
        }
    }

    /// The square-free polynomial with the same distinct roots.
    pub fn square_free_part(&self) -> Polynomial {
        if self.degree().unwrap_or(0) == 0 {
            return self.clone();
        }
        let g = self.gcd(&self.derivative());
        if g.degree() == Some(0) {
            self.clone()
        } else {
            self.exact_div(&g)
        }
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero);
            let b = rhs.coeffs.get(i).cloned().unwrap_or_else(Rational::zero);
            coeffs.push(a + b);
        }
        Polynomial::from_coeffs(coeffs)
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &(-rhs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut coeffs = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] = &coeffs[i + j] + a * b;
            }
        }
        Polynomial::from_coeffs(coeffs)
    }
}
