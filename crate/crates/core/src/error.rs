use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("error budget {target:e} not reached within {terms} terms (best bound {best_bound:e})")]
    Convergence {
        target: f64,
        best_bound: f64,
        terms: usize,
    },

    #[error("quadrature did not converge: estimated error {estimate:e} after {intervals} intervals")]
    Quadrature { estimate: f64, intervals: usize },

    #[error("requested order {order} exceeds the configured cap {cap}")]
    Capability { order: u32, cap: u32 },

    #[error("value out of floating-point range: {0}")]
    Range(String),

    #[error("no certified witness found for f_{{{m},{n}}}: {reason}")]
    SearchExhausted { m: u32, n: u32, reason: String },

    #[error("numeric evidence does not classify f_{{{m},{n}}}: {reason}")]
    Unclassified { m: u32, n: u32, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
