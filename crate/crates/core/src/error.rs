use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A physical parameter lies outside the model's domain.
    #[error("{0}")]
    Domain(String),

    /// Airy evaluation requested where the error bound is not certified.
    #[error("airy argument {0} is outside the supported range")]
    AiryRange(f64),

    #[error("determinant evaluated to {value} at {at}")]
    NonFinite { at: f64, value: f64 },

    #[error("invalid bracket [{lo}, {hi}]: values {f_lo:e} and {f_hi:e} do not straddle zero")]
    InvalidBracket { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error("root refinement did not converge within {0} iterations")]
    NoConvergence(usize),

    #[error("invalid search range [{lo}, {hi}]: {reason}")]
    InvalidRange { lo: f64, hi: f64, reason: String },

    #[error("matrix is not singular: residual {residual:e} exceeds {limit:e}")]
    NotAMode { residual: f64, limit: f64 },

    #[error("integration step underflows at x = {0}")]
    StepUnderflow(f64),

    #[error("invalid parameter set: {0}")]
    Parameters(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
