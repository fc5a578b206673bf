use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("potential evaluated at singular abscissa {0}")]
    SingularEvaluation(String),
    #[error("no sign change of the characteristic function on ({lo}, {hi}) for n = {n}")]
    BracketFailure { n: u32, lo: String, hi: String },
    #[error("quadrature parameter search exceeded K = {cap}")]
    ParameterSearchExhausted { cap: usize },
    #[error("denominator sin(sqrt(lambda0)(1-alpha)) = {0} is numerically zero; resonance misclassified")]
    DegenerateDenominator(String),
    #[error("potential has zero L1 norm; the convergence radius is unbounded")]
    ZeroNorm,
    #[error("convergence rate r_n = {0} is not below 1; a-priori bounds are undefined")]
    NotConvergent(String),
    #[error("adaptive step collapsed near x = {0}")]
    StepUnderflow(f64),
    #[error("shooting function has no sign change on [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid value for `{field}`: {reason}")]
    Validation { field: String, reason: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn validation(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Validation { field: field.into(), reason: reason.into() }
    }
}
