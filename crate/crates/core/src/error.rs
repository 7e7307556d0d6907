//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A tensor product or chain operator would exceed the configured
    /// dimension cap.
    #[error("matrix dimension {got} exceeds cap {cap}")]
    DimensionCap { got: usize, cap: usize },

    /// Operands have incompatible shapes.
    #[error("shape mismatch: {0}")]
    Shape(String),

    /// A root of unity argument is not primitive of the required order.
    #[error("bad root of unity: {0}")]
    BadRoot(String),

    /// A model parameter is out of range or inconsistent.
    #[error("invalid parameter: {0}")]
    Param(String),

    /// Boundary twist and charge sector labels do not match.
    #[error("sector mismatch: {0}")]
    Sector(String),

    /// The eigensolver did not converge or returned nonsense.
    #[error("eigensolver failure: {0}")]
    Eigen(String),

    /// A computed matrix contains NaN or infinite entries.
    #[error("nonfinite entry at ({0}, {1})")]
    NonFinite(usize, usize),
}

pub type Result<T> = std::result::Result<T, Error>;
