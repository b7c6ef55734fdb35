use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid degree model: {0}")]
    InvalidModel(String),

    #[error("invalid strain parameters: {0}")]
    InvalidParams(String),

    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    /// Both single-edge and triangle means are zero; the Jacobian has no meaning.
    #[error("degenerate degree model: <s> = 0 and <t> = 0")]
    DegenerateModel,

    #[error("fixed point did not converge after {iterations} iterations (residual {residual:e})")]
    Convergence { iterations: usize, residual: f64 },

    #[error("malformed input: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
