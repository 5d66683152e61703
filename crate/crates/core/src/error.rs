use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("precision insufficient: {0}")]
    PrecisionInsufficient(String),
    #[error("orbit integrality: P(x_{index}) is not an integer")]
    OrbitIntegrality { index: usize },
    #[error("divergence not established: {0}")]
    DivergenceNotEstablished(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("multiplicatively dependent bases, relation {0:?}")]
    MultiplicativeDependence(Vec<i64>),
}

impl Error {
    /// Short machine-readable tag used in JSON error objects.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::PrecisionInsufficient(_) => "precision-insufficient",
            Error::OrbitIntegrality { .. } => "orbit-integrality",
            Error::DivergenceNotEstablished(_) => "divergence-not-established",
            Error::Parse(_) => "parse",
            Error::InvalidInput(_) => "invalid-input",
            Error::Unsupported(_) => "unsupported",
            Error::MultiplicativeDependence(_) => "multiplicative-dependence",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn precision(msg: impl Into<String>) -> Error {
    Error::PrecisionInsufficient(msg.into())
}
