use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("Jacobi exponents must satisfy alpha > -1 and beta > -1 (got alpha = {alpha}, beta = {beta})")]
    ParameterDomain { alpha: f64, beta: f64 },

    #[error("explicit sum limited to degree {max} (requested {n})")]
    AccuracyDomain { n: usize, max: usize },

    #[error("weight has a pole at x = {x}")]
    EndpointPole { x: f64 },

    #[error("closed form requires n != m (got n = m = {n})")]
    DegeneratePair { n: usize },

    #[error("{0}")]
    Domain(String),

    #[error(
        "quadrature did not reach tolerance {tol:e} within {nodes} nodes \
         (best estimate {best}, error estimate {error_estimate:e})"
    )]
    Convergence {
        best: f64,
        error_estimate: f64,
        tol: f64,
        nodes: usize,
    },

    #[error("decay fit: {0}")]
    Fit(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for errors caused by inputs outside an operation's domain.
    pub fn is_domain(&self) -> bool {
        !matches!(self, Error::Convergence { .. } | Error::Fit(_))
    }
}
