//! Finitely supported distributions with exact rational atoms.

use crate::exactalg::{parse_rational, pow, Rational};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// One point mass: position `x`, probability `p > 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Atom {
    pub x: Rational,
    pub p: Rational,
}

/// Smallest and largest support point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportBounds {
    pub min: Rational,
    pub max: Rational,
}

/// A probability distribution with finitely many atoms, kept sorted by
/// position with distinct positions, strictly positive probabilities, and
/// total mass exactly 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscreteDistribution {
    atoms: Vec<Atom>,
    support: SupportBounds,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum DistError {
    #[error("probabilities sum to {sum}, not 1")]
    MassNotOne { sum: Rational },
    #[error("negative probability {p} at position {x}")]
    NegativeProbability { x: Rational, p: Rational },
    #[error("distribution has no atoms with positive probability")]
    Empty,
    #[error("affine transform with zero scale")]
    ZeroScale,
}

impl DiscreteDistribution {
    /// Normalizes a list of (position, probability) pairs: merges equal
    /// positions, drops zero-probability entries, sorts by position, and
    /// validates positivity and total mass.
    pub fn from_pairs(
        pairs: impl IntoIterator<Item = (Rational, Rational)>,
    ) -> Result<Self, DistError> {
        let mut entries: Vec<(Rational, Rational)> = Vec::new();
        let mut sum = Rational::zero();
        for (x, p) in pairs {
            if p.is_negative() {
                return Err(DistError::NegativeProbability { x, p });
            }
            sum = sum + &p;
            if p.is_zero() {
                continue;
            }
            entries.push((x, p));
        }
        if entries.is_empty() {
            return Err(DistError::Empty);
        }
        if !sum.is_one() {
            return Err(DistError::MassNotOne { sum });
        }
        entries.sort_by(|a, b| a.0.cmp(&b.0));
        let mut atoms: Vec<Atom> = Vec::with_capacity(entries.len());
        for (x, p) in entries {
            match atoms.last_mut() {
                Some(last) if last.x == x => last.p = &last.p + p,
                _ => atoms.push(Atom { x, p }),
            }
        }
        let support = SupportBounds {
            min: atoms.first().unwrap().x.clone(),
            max: atoms.last().unwrap().x.clone(),
        };
        Ok(DiscreteDistribution { atoms, support })
    }

    /// The point mass at `x`.
    pub fn dirac(x: Rational) -> Self {
        DiscreteDistribution::from_pairs([(x, Rational::one())]).unwrap()
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn support(&self) -> &SupportBounds {
        &self.support
    }

    /// Right-continuous CDF value `P[X <= eta]`.
    pub fn cdf(&self, eta: &Rational) -> Rational {
        self.atoms
            .iter()
            .take_while(|a| a.x <= *eta)
            .fold(Rational::zero(), |acc, a| acc + &a.p)
    }

    /// `E[X^k]`, with `k = 0` giving 1.
    pub fn raw_moment(&self, k: u32) -> Rational {
        self.atoms
            .iter()
            .fold(Rational::zero(), |acc, a| acc + &a.p * pow(&a.x, k))
    }

    pub fn mean(&self) -> Rational {
        self.raw_moment(1)
    }

    /// `E[(b - X)^k]`, signed: positions above `b` contribute with the
    /// sign of `(b - x)^k`. With `k = 0` this is 1.
    pub fn shifted_moment(&self, b: &Rational, k: u32) -> Rational {
        self.atoms
            .iter()
            .fold(Rational::zero(), |acc, a| acc + &a.p * pow(&(b - &a.x), k))
    }

    /// `E[(eta - X)_+^k]` for `k >= 1`: only atoms at or below `eta`
    /// contribute.
    pub fn lower_partial_moment(&self, eta: &Rational, k: u32) -> Rational {
        assert!(k >= 1, "partial moment order must be at least 1");
        self.atoms
            .iter()
            .take_while(|a| a.x <= *eta)
            .fold(Rational::zero(), |acc, a| {
                acc + &a.p * pow(&(eta - &a.x), k)
            })
    }

    /// The distribution of `scale * X + shift`. `scale` may be negative
    /// but not zero.
    pub fn affine(&self, scale: &Rational, shift: &Rational) -> Result<Self, DistError> {
        if scale.is_zero() {
            return Err(DistError::ZeroScale);
        }
        DiscreteDistribution::from_pairs(
            self.atoms
                .iter()
                .map(|a| (&a.x * scale + shift, a.p.clone())),
        )
    }
}

/// Wire form of a distribution: `{"atoms": [{"x": "2/9", "p": "8/9"}]}`
/// with rationals as exact `"num/den"` strings. Duplicate or unknown keys
/// are rejected on read; positions may repeat and are merged.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DistributionFile {
    pub atoms: Vec<AtomRecord>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomRecord {
    pub x: String,
    pub p: String,
}

#[derive(Debug, thiserror::Error)]
pub enum DistFileError {
    #[error("malformed distribution file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("atom {index}: {source}")]
    BadRational {
        index: usize,
        #[source]
        source: crate::exactalg::ParseRationalError,
    },
    #[error(transparent)]
    Dist(#[from] DistError),
}

impl DistributionFile {
    pub fn from_distribution(d: &DiscreteDistribution) -> Self {
        DistributionFile {
            atoms: d
                .atoms()
                .iter()
                .map(|a| AtomRecord {
                    x: a.x.to_string(),
                    p: a.p.to_string(),
                })
                .collect(),
        }
    }

    pub fn to_distribution(&self) -> Result<DiscreteDistribution, DistFileError> {
        let mut pairs = Vec::with_capacity(self.atoms.len());
        for (index, rec) in self.atoms.iter().enumerate() {
            let x = parse_rational(&rec.x)
                .map_err(|source| DistFileError::BadRational { index, source })?;
            let p = parse_rational(&rec.p)
                .map_err(|source| DistFileError::BadRational { index, source })?;
            pairs.push((x, p));
        }
        Ok(DiscreteDistribution::from_pairs(pairs)?)
    }
}

/// Reads a distribution from its JSON wire form.
pub fn distribution_from_json(text: &str) -> Result<DiscreteDistribution, DistFileError> {
    let file: DistributionFile = serde_json::from_str(text)?;
    file.to_distribution()
}

/// Renders a distribution to its JSON wire form.
pub fn distribution_to_json(d: &DiscreteDistribution) -> String {
    serde_json::to_string_pretty(&DistributionFile::from_distribution(d))
        .expect("distribution serialization cannot fail")
}
