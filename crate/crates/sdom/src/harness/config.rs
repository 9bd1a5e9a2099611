//! Experiment configuration: validation, defaults, and the JSON wire
//! format consumed by the `scan` subcommand.

use serde::{Deserialize, Serialize};

use crate::exactalg::{parse_rational, ParseRationalError, Rational, RealInterval};

/// Settings for a seeded consistency experiment. `interval` is where
/// atom positions live and doubles as the tight reference interval; the
/// wide interval ends at `extended_hi` (default: the tight interval
/// doubled in width). `degrees` lists the moment-preservation degrees to
/// pair with each order; `inject_stride` plants a constructed
/// counterexample pair every that-many trials (0 disables injection).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub trials: u64,
    pub max_atoms: u32,
    pub denominator_bound: u64,
    pub interval: RealInterval,
    pub extended_hi: Option<Rational>,
    pub orders: Vec<u32>,
    pub degrees: Vec<u32>,
    pub equal_means: bool,
    pub inject_stride: u64,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ConfigError {
    #[error("trials must be at least 1")]
    ZeroTrials,
    #[error("max_atoms must be at least 1")]
    ZeroAtoms,
    #[error("denominator_bound must be at least 2")]
    SmallDenominatorBound,
    #[error("the position interval must be finite with lo < hi")]
    BadInterval,
    #[error("extended_hi must exceed the interval's right endpoint")]
    BadExtendedEndpoint,
    #[error("orders must be a nonempty list of positive integers")]
    BadOrders,
}

impl ExperimentConfig {
    /// A ready-to-run configuration over `[0, 1]`: 4 atoms, denominators
    /// up to 16, plain dominance (degree 0), injection every 100 trials.
    pub fn with_defaults(seed: u64, trials: u64, orders: Vec<u32>) -> Self {
        use crate::exactalg::rat_int;
        ExperimentConfig {
            seed,
            trials,
            max_atoms: 4,
            denominator_bound: 16,
            interval: RealInterval::closed(rat_int(0), rat_int(1)),
            extended_hi: None,
            orders,
            degrees: vec![0],
            equal_means: false,
            inject_stride: 100,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.trials == 0 {
            return Err(ConfigError::ZeroTrials);
        }
        if self.max_atoms == 0 {
            return Err(ConfigError::ZeroAtoms);
        }
        if self.denominator_bound < 2 {
            return Err(ConfigError::SmallDenominatorBound);
        }
        let hi = match (self.interval.lo(), self.interval.hi()) {
            (Some(lo), Some(hi)) if lo < hi => hi,
            _ => return Err(ConfigError::BadInterval),
        };
        if let Some(ext) = &self.extended_hi {
            if ext <= hi {
                return Err(ConfigError::BadExtendedEndpoint);
            }
        }
        if self.orders.is_empty() || self.orders.iter().any(|&n| n == 0) {
            return Err(ConfigError::BadOrders);
        }
        Ok(())
    }

    pub fn lo(&self) -> &Rational {
        self.interval
            .lo()
            .expect("validated configs have finite intervals")
    }

    pub fn hi(&self) -> &Rational {
        self.interval
            .hi()
            .expect("validated configs have finite intervals")
    }

    /// Right endpoint of the wide reference interval; defaults to the
    /// tight interval doubled in width.
    pub fn extended(&self) -> Rational {
        match &self.extended_hi {
            Some(ext) => ext.clone(),
            None => self.hi() + (self.hi() - self.lo()),
        }
    }

    /// The (order, degree) combinations actually run: sorted, deduped,
    /// and restricted to degree at most order minus one.
    pub fn combos(&self) -> Vec<(u32, u32)> {
        let mut orders = self.orders.clone();
        orders.sort_unstable();
        orders.dedup();
        let mut degrees = self.degrees.clone();
        degrees.sort_unstable();
        degrees.dedup();
        if degrees.is_empty() {
            degrees.push(0);
        }
        let mut combos = Vec::new();
        for &n in &orders {
            for &m in &degrees {
                if m <= n.saturating_sub(1) {
                    combos.push((n, m));
                }
            }
        }
        combos
    }
}

fn default_max_atoms() -> u32 {
    4
}

fn default_denominator_bound() -> u64 {
    16
}

fn default_inject_stride() -> u64 {
    100
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    seed: u64,
    trials: u64,
    #[serde(default = "default_max_atoms")]
    max_atoms: u32,
    #[serde(default = "default_denominator_bound")]
    denominator_bound: u64,
    interval: IntervalRecord,
    #[serde(default)]
    extended_hi: Option<String>,
    orders: Vec<u32>,
    #[serde(default)]
    degrees: Option<Vec<u32>>,
    #[serde(default)]
    equal_means: bool,
    #[serde(default = "default_inject_stride")]
    inject_stride: u64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct IntervalRecord {
    lo: String,
    hi: String,
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigFileError {
    #[error("malformed config JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("field {field:?} is not a rational: {source}")]
    BadRational {
        field: &'static str,
        source: ParseRationalError,
    },
    #[error(transparent)]
    Config(#[from] ConfigError),
}

pub fn config_from_json(text: &str) -> Result<ExperimentConfig, ConfigFileError> {
    let parse = |field: &'static str, text: &str| -> Result<Rational, ConfigFileError> {
        parse_rational(text).map_err(|source| ConfigFileError::BadRational { field, source })
    };
    let file: ConfigFile = serde_json::from_str(text)?;
    let lo = parse("lo", &file.interval.lo)?;
    let hi = parse("hi", &file.interval.hi)?;
    if lo >= hi {
        return Err(ConfigError::BadInterval.into());
    }
    let extended_hi = match &file.extended_hi {
        Some(text) => Some(parse("extended_hi", text)?),
        None => None,
    };
    let cfg = ExperimentConfig {
        seed: file.seed,
        trials: file.trials,
        max_atoms: file.max_atoms,
        denominator_bound: file.denominator_bound,
        interval: RealInterval::closed(lo, hi),
        extended_hi,
        orders: file.orders,
        degrees: file.degrees.unwrap_or_else(|| vec![0]),
        equal_means: file.equal_means,
        inject_stride: file.inject_stride,
    };
    cfg.validate()?;
    Ok(cfg)
}
