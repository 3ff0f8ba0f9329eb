use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error in {function}: {detail}")]
    Domain {
        function: &'static str,
        detail: String,
    },

    #[error("degenerate lattice basis: {0}")]
    DegenerateBasis(String),

    #[error("enumeration budget of {budget} vectors exceeded")]
    EnumerationBudget { budget: usize },

    #[error("unsupported rank {rank} (maximum {max})")]
    UnsupportedRank { rank: usize, max: usize },

    #[error("s = {0} is a pole of the completed Epstein zeta function")]
    Pole(f64),

    #[error("s = {s} lies outside the region of absolute convergence (s > {n})")]
    OutOfRegion { s: f64, n: usize },

    #[error("did not converge after {steps} refinements (last increment {last_increment:e})")]
    NoConvergence { steps: usize, last_increment: f64 },

    #[error("invalid discriminant {0}: {1}")]
    Discriminant(String, String),

    #[error("unsupported field: {0}")]
    UnsupportedField(String),

    #[error("field-data schema violation: {0}")]
    Schema(String),

    #[error("field invariant `{check}` violated: {detail}")]
    Invariant { check: &'static str, detail: String },

    #[error("index {index} out of range (size {len})")]
    IndexOutOfRange { index: usize, len: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(function: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            function,
            detail: detail.into(),
        }
    }
}
