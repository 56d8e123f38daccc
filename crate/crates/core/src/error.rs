use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid value for `{field}`: {reason}")]
    InvalidConfig { field: &'static str, reason: String },

    #[error("insufficient data: need at least {needed} samples, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("link distance must be positive, got {0} m")]
    NonPositiveDistance(f64),

    #[error("erfi({x}) overflows f64; arguments are limited to |x| <= {limit}")]
    ErfiOverflow { x: f64, limit: f64 },

    #[error("complex erfi is not supported at {re}{im:+}i")]
    UnsupportedArgument { re: f64, im: f64 },

    #[error("antenna selection needs finite non-negative powers for both dipoles: {0}")]
    IncompleteSelection(String),

    #[error("rate approximation undefined: {0}")]
    RatePrecondition(String),

    #[error("adaptive quadrature did not converge (estimate {value}, error {abs_err})")]
    Quadrature { value: f64, abs_err: f64 },

    #[error("complex closed form left an imaginary residue of {residue:e} (relative)")]
    ImaginaryResidue { residue: f64 },
}
