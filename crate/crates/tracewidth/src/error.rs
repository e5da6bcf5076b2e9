use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("capability exceeded: {0}")]
    Capability(String),
    #[error("ill-conditioned input: {0}")]
    IllConditioned(String),
    #[error("pole at a = {pole}; residue {residue}")]
    Pole {
        pole: i64,
        residue: num_complex::Complex64,
    },
    #[error("quadrature did not converge (estimate {estimate:e})")]
    Quadrature { estimate: f64 },
    #[error("field evaluated at its singular point")]
    Singularity,
    #[error("field point too close to a source cell (distance {distance:e})")]
    Proximity { distance: f64 },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("degenerate curve: {0}")]
    Degenerate(String),
    #[error("symbol rejected: {0}")]
    Rejected(String),
    #[error("sample {index} (theta = {theta}): {source}")]
    Sample {
        index: usize,
        theta: f64,
        source: Box<Error>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
