use thiserror::Error;

/// Errors produced by the statistical and numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the function.
    #[error("domain error in {func}: {detail}")]
    Domain { func: &'static str, detail: String },

    /// The requested contour point or threshold does not exist.
    #[error("no solution: {0}")]
    NoSolution(String),

    /// The two hypotheses (or a density) are degenerate for this query.
    #[error("degenerate configuration: {0}")]
    Degenerate(String),

    /// The operation is only defined for a different hypothesis family.
    #[error("family mismatch: {0}")]
    FamilyMismatch(String),

    /// A root could not be bracketed; carries the last bracket tried.
    #[error("root bracketing failed in {func}: f({lo}) = {f_lo}, f({hi}) = {f_hi}")]
    Bracket {
        func: &'static str,
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    /// An iterative method ran out of iterations.
    #[error("no convergence in {func} after {iterations} iterations")]
    Convergence { func: &'static str, iterations: usize },

    /// A limit exceeded the parameter cap.
    #[error("overflow: {0}")]
    Overflow(String),
}

impl Error {
    pub(crate) fn domain(func: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            func,
            detail: detail.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
