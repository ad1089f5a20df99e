use thiserror::Error;

/// Errors raised anywhere in the crate.
///
/// Tier indices carried by variants are 1-based, matching the user-facing
/// numbering of tiers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("network configuration has no tiers")]
    EmptyTierList,

    #[error("tier {tier}: path-loss exponent {alpha} must be greater than 2")]
    InvalidExponent { tier: usize, alpha: f64 },

    #[error("{what} must be positive, got {value}{}", tier_suffix(*.tier))]
    NonPositiveParameter {
        tier: Option<usize>,
        what: &'static str,
        value: f64,
    },

    #[error("tier index {index} out of range 1..={tiers}")]
    IndexOutOfRange { index: usize, tiers: usize },

    #[error("path-loss exponent {0} must be greater than 2")]
    AlphaOutOfRange(f64),

    #[error("quadrature failed to reach tolerance: {0}")]
    QuadratureFailure(String),

    #[error("closed-form outage not applicable: {0}")]
    NotApplicable(&'static str),

    #[error("user density must be positive to compute per-user throughput")]
    ZeroUserDensity,

    #[error("no base station inside the simulation window")]
    EmptyDeployment,

    #[error("empty sample set")]
    EmptySampleSet,

    #[error("invalid simulation settings: {0}")]
    InvalidSimSettings(String),

    #[error("config parse error: {0}")]
    ConfigParse(String),

    #[error("usage error: {0}")]
    Usage(String),

    #[error("io error: {0}")]
    Io(String),
}

fn tier_suffix(tier: Option<usize>) -> String {
    match tier {
        Some(t) => format!(" (tier {t})"),
        None => String::new(),
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
