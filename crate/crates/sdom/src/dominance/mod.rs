//! Stochastic dominance checks over exact rational arithmetic.
//!
//! Two finitely-supported distributions can be compared at any dominance
//! order `n`, either over the whole real line or relative to a reference
//! interval `[a, b]`, optionally with leading moments pinned equal. Every
//! check returns a [`Verdict`]: a bare pass, or a failure carrying a
//! [`Witness`] precise enough to re-derive the violation from the inputs.
//!
//! The pointwise comparisons reduce to sign questions about piecewise
//! polynomials (the iterated CDFs of the two sides), which are settled by
//! root counting rather than sampling, so verdicts are exact.

mod checks;
mod piecewise;

pub(crate) use checks::require_support_inside;
pub use checks::{
    check_nmsd_interval, check_nmsd_real, check_nsd_interval, check_nsd_real, Verdict, Witness,
};
pub use piecewise::{difference_pp, iterated_cdf_at, DominanceError, IteratedCdf, PiecewisePoly};

use crate::exactalg::{parse_rational, ParseRationalError, Rational};
use serde::{Deserialize, Serialize};

/// On-disk form of a [`Verdict`]. Rationals travel as strings so the wire
/// stays exact.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VerdictFile {
    holds: bool,
    witness: Option<WitnessRecord>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum WitnessRecord {
    Pointwise { eta: String, gap: String },
    Boundary { k: u32, lhs: String, rhs: String },
    Moment { k: u32, lhs: String, rhs: String },
}

#[derive(Debug, thiserror::Error)]
pub enum VerdictFileError {
    #[error("malformed verdict JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("field {field:?} is not a rational: {source}")]
    BadRational {
        field: &'static str,
        source: ParseRationalError,
    },
    #[error("verdict claims to hold but carries a witness (or vice versa)")]
    Inconsistent,
}

impl WitnessRecord {
    fn from_witness(w: &Witness) -> Self {
        match w {
            Witness::PointwiseViolation { eta, gap } => WitnessRecord::Pointwise {
                eta: eta.to_string(),
                gap: gap.to_string(),
            },
            Witness::BoundaryViolation { k, lhs, rhs } => WitnessRecord::Boundary {
                k: *k,
                lhs: lhs.to_string(),
                rhs: rhs.to_string(),
            },
            Witness::MomentMismatch { k, lhs, rhs } => WitnessRecord::Moment {
                k: *k,
                lhs: lhs.to_string(),
                rhs: rhs.to_string(),
            },
        }
    }

    fn to_witness(&self) -> Result<Witness, VerdictFileError> {
        let parse = |field: &'static str, text: &str| -> Result<Rational, VerdictFileError> {
            parse_rational(text).map_err(|source| VerdictFileError::BadRational { field, source })
        };
        Ok(match self {
            WitnessRecord::Pointwise { eta, gap } => Witness::PointwiseViolation {
                eta: parse("eta", eta)?,
                gap: parse("gap", gap)?,
            },
            WitnessRecord::Boundary { k, lhs, rhs } => Witness::BoundaryViolation {
                k: *k,
                lhs: parse("lhs", lhs)?,
                rhs: parse("rhs", rhs)?,
            },
            WitnessRecord::Moment { k, lhs, rhs } => Witness::MomentMismatch {
                k: *k,
                lhs: parse("lhs", lhs)?,
                rhs: parse("rhs", rhs)?,
            },
        })
    }
}

pub fn verdict_to_json(v: &Verdict) -> String {
    let file = VerdictFile {
        holds: v.holds(),
        witness: v.witness().map(WitnessRecord::from_witness),
    };
    serde_json::to_string_pretty(&file).expect("verdict serialization cannot fail")
}

pub fn verdict_from_json(text: &str) -> Result<Verdict, VerdictFileError> {
    let file: VerdictFile = serde_json::from_str(text)?;
    match (file.holds, file.witness) {
        (true, None) => Ok(Verdict::pass()),
        (false, Some(record)) => Ok(Verdict::fail(record.to_witness()?)),
        _ => Err(VerdictFileError::Inconsistent),
    }
}
