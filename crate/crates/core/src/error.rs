use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("vector norm {0} is too far from 1 to be a sphere point")]
    NotUnitNorm(f64),

    #[error("tangent vector is not tangent at its base point (inner product {0:e})")]
    NotTangent(f64),

    #[error("tangent vector is attached to a different base point")]
    BaseMismatch,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dataset is empty")]
    EmptyDataset,

    #[error(
        "query coincides with training point {index}; the kernel is infinite there, \
         use the interpolation branch of the smoother instead"
    )]
    CoincidentQuery { index: usize },

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
