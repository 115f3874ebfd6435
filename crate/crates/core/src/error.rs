use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("inconsistent parameters: {0}")]
    InconsistentParameters(String),

    #[error("non-physical parameter: {0}")]
    NonPhysical(String),

    #[error("missing parameter: {0}")]
    MissingParameter(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("no convergence: {0}")]
    Convergence(String),

    #[error("quadrature failed: {0}")]
    Quadrature(String),

    #[error("pole at T_c/T_0 = 1")]
    Pole,

    /// The healing-length radicand is not positive; `critical_density` is the
    /// density at which it vanishes.
    #[error("negative radicand: density exceeds n* = {critical_density:e} m^-3")]
    NegativeRadicand { critical_density: f64 },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn non_physical(msg: impl Into<String>) -> Self {
        Error::NonPhysical(msg.into())
    }
}
