use thiserror::Error;

/// Failure modes shared by every evaluator in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A factor that must be inverted is numerically zero.
    #[error("singular parameters: factor `{factor}` vanishes (|value| = {magnitude:e})")]
    Singular { factor: String, magnitude: f64 },

    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A terminating elliptic series violated its balancing condition.
    #[error("balancing condition violated: relative defect {defect:e}")]
    Balancing { defect: f64 },

    /// A series was described without a valid terminating parameter.
    #[error("series does not terminate: {0}")]
    NotTerminating(String),

    /// The collocation system could not be made well conditioned.
    #[error("ill-conditioned collocation system (condition estimate {condition:e})")]
    IllConditioned { condition: f64 },

    /// A requested size exceeds a configured budget.
    #[error("size {size} exceeds budget {budget}")]
    Budget { size: usize, budget: usize },

    /// The generic-parameter sampler exhausted its rejection budget.
    #[error("sampling failed after {attempts} attempts: {reason}")]
    Sampling { attempts: usize, reason: String },

    /// Invalid context or configuration values.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// Unknown verification suite name.
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn singular(factor: impl Into<String>, magnitude: f64) -> Self {
        Error::Singular {
            factor: factor.into(),
            magnitude,
        }
    }
}
