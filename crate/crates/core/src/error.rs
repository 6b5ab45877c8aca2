use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("preperiodic point rejected: {0} is of the form zeta + 1/zeta")]
    Preperiodic(String),

    /// The point lies on the orbit, so every chordal distance vanishes.
    #[error("{point} is a conjugate of the preperiodic orbit of order {order}")]
    Coincidence { point: String, order: u64 },

    #[error("root isolation failed at {bits} bits (best certified bound {best_bound:e})")]
    RootNonConvergence { bits: u32, best_bound: f64 },

    #[error("iteration budget of {iterations} exhausted (estimate {estimate}, bound {bound:e})")]
    IterationBudget {
        iterations: usize,
        estimate: f64,
        bound: f64,
    },

    #[error("quadrature did not reach {tolerance:e} (estimate {estimate}, error {error:e})")]
    Quadrature {
        tolerance: f64,
        estimate: f64,
        error: f64,
    },

    #[error("factorization budget exhausted with composite cofactor of {bits} bits")]
    FactorizationBudget { bits: u64 },

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
