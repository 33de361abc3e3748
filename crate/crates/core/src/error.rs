use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix contains a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("matrix is not symmetric (asymmetry {asymmetry:e} exceeds {bound:e})")]
    NotSymmetric { asymmetry: f64, bound: f64 },
    #[error("symmetric eigensolver did not converge after {sweeps} sweeps")]
    EigFailed { sweeps: usize },
    #[error("matrix is not positive definite (smallest eigenvalue {min_eig:e})")]
    NotPositiveDefinite { min_eig: f64 },
    #[error("matrix is singular or too ill-conditioned to invert (condition estimate {cond:e})")]
    Singular { cond: f64 },
    #[error("pivot block of the Schur complement is not positive definite")]
    PivotNotPD,
    #[error("eigenvalues of -K^2 do not pair up (mismatch {mismatch:e})")]
    PairingFailed { mismatch: f64 },
    #[error("could not build a canonical skew form on a repeated symplectic eigenvalue cluster")]
    DegenerateClusterFailure,
    #[error("matrix is not symplectic (|S^T J S - J|_max = {residual:e})")]
    NotSymplectic { residual: f64 },
    #[error("subspace is not complex (|PJ - JP|_max = {commutator:e})")]
    NotComplex { commutator: f64 },
    #[error("vectors are rank deficient")]
    RankDeficient,
    #[error("complex Gram-Schmidt lost rank")]
    GramSchmidtBreakdown,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl Error {
    /// Process exit status used by the command-line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io(_)
            | Error::Parse(_)
            | Error::DimensionMismatch(_)
            | Error::NonFinite { .. }
            | Error::NotSymmetric { .. }
            | Error::InvalidArgument(_) => 2,
            Error::NotPositiveDefinite { .. } | Error::PivotNotPD => 3,
            Error::NotSymplectic { .. } => 4,
            Error::NotComplex { .. } | Error::RankDeficient => 5,
            Error::EigFailed { .. }
            | Error::Singular { .. }
            | Error::PairingFailed { .. }
            | Error::DegenerateClusterFailure
            | Error::GramSchmidtBreakdown => 1,
        }
    }
}
