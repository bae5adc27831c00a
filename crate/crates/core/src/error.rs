use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (skew residual {residual:.3e})")]
    NotHermitian { residual: f64 },

    #[error("matrix is numerically singular (pivot {pivot:.3e} at column {column})")]
    Singular { pivot: f64, column: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("point outside the open unit disk: |z| = {modulus}")]
    Domain { modulus: f64 },

    #[error("spectrum touches the unit circle: |lambda| = {modulus}")]
    SpectrumOnBoundary { modulus: f64 },

    #[error("X is not self-adjoint (skew residual {residual:.3e})")]
    NotSelfAdjoint { residual: f64 },

    #[error("G1 certification failed: certificate {certificate:.3e} exceeds {threshold:.1e}")]
    CertificationFailed { certificate: f64, threshold: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Parse(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
