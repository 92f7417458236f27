use thiserror::Error;

/// Errors shared by every layer of the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("matrix is singular or numerically not invertible (condition {condition:.3e})")]
    Singular { condition: f64 },

    #[error("eigen-iteration did not converge (residual {residual:.3e})")]
    EigenNonConvergence { residual: f64 },

    #[error("operators do not commute (relative commutator residual {residual:.3e})")]
    NonCommuting { residual: f64 },

    #[error("input is not unipotent: |(U-I)^dim| = {residual:.3e}")]
    NotUnipotent { residual: f64 },

    #[error("inner product is not positive definite")]
    IndefiniteInnerProduct,

    #[error("eigenvalue of modulus {modulus} is not on the unit circle")]
    NonUnitaryEigenvalue { modulus: f64 },

    #[error("filtration lies outside the period domain at step p={p} (margin {margin:.3e})")]
    OutsideDomain { p: i64, margin: f64 },

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("unknown registry family `{0}`")]
    UnknownFamily(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
