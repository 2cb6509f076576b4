use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A Gaussian integral whose curvature has non-positive real part.
    #[error("divergent integral: Re(A) = {re_curvature:e} is not positive")]
    DivergentIntegral { re_curvature: f64 },

    #[error("degree {degree} exceeds the cap of {cap}")]
    DegreeCap { degree: usize, cap: usize },

    /// The function left the computable domain of a special operator.
    #[error("domain exit in {op}: resulting Re(A) = {re_curvature:e}")]
    DomainExit { op: String, re_curvature: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

pub type Result<T> = std::result::Result<T, Error>;
