use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {op}: {left:?} vs {right:?}")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("expected {expected} entries for the declared shape, got {got}")]
    EntryCount { expected: usize, got: usize },

    #[error("matrix contains a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("eigenvalue iteration did not converge")]
    EigenNonConvergence,

    #[error("singular value iteration did not converge")]
    SvdNonConvergence,

    #[error("symbol does not define an involution: |S conj(S) - I|_F = {residual:e}")]
    NotInvolutive { residual: f64 },

    #[error("symbol is not unitary: |S* S - I|_F = {residual:e}")]
    NotUnitary { residual: f64 },

    #[error("conjugation does not split along the subspace: off-diagonal residual {residual:e}")]
    NotReducing { residual: f64 },

    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),

    #[error("index {index} out of range for sequence of length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("invalid tolerance policy: {0}")]
    InvalidTolerance(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("malformed input: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
