use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("singularity: {0}")]
    Singularity(String),
    #[error("capability error: {0}")]
    Capability(String),
    #[error("convergence failure: {0}")]
    Convergence(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("distributional index: {0}")]
    Distributional(String),
    #[error("boundary: {0}")]
    Boundary(String),
    #[error("parameter singularity: {0}")]
    ParameterSingularity(String),
}

impl Error {
    /// Short machine-readable tag, used in JSON error objects.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::Singularity(_) => "singularity",
            Error::Capability(_) => "capability",
            Error::Convergence(_) => "convergence",
            Error::Unsupported(_) => "unsupported",
            Error::Distributional(_) => "distributional",
            Error::Boundary(_) => "boundary",
            Error::ParameterSingularity(_) => "parameter-singularity",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
