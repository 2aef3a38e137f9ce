use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid rational literal `{0}`")]
    BadRational(String),

    #[error("ring mismatch: {0}")]
    RingMismatch(String),

    #[error("family constraint violated: {0}")]
    FamilyConstraint(String),

    #[error("no Q polynomial with the expected ansatz (nullspace is trivial)")]
    NoSolution,

    #[error("degenerate parameters: Q ansatz nullspace has dimension {dim}")]
    DegenerateNullspace { dim: usize, basis: Vec<Vec<String>> },

    #[error("zero denominator in recurrence step s = {0} (resonant parameters)")]
    ResonantRecurrence(usize),

    #[error("Q fails x-independence of the curve functional: residual {0}")]
    CurveNotConstant(String),

    #[error("invalid configuration: {0}")]
    BadConfig(String),

    #[error("numeric abort at t = {t}: non-finite field values")]
    NumericAbort { t: f64 },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}
