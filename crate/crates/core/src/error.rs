use thiserror::Error;

/// Errors raised by the verification toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (relative residual {residual:.3e})")]
    NonHermitian { residual: f64 },

    #[error("iteration did not converge after {iterations} sweeps")]
    NoConvergence { iterations: usize },

    #[error("shape mismatch: expected {expected:?}, got {found:?}")]
    ShapeMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },

    #[error("matrix has non-finite entries")]
    NonFinite,

    #[error("payload of shape {found:?} does not fit {family} (expected {expected:?})")]
    PayloadShape {
        family: String,
        expected: (usize, usize),
        found: (usize, usize),
    },

    #[error("payload violates the {family} linear constraint (residual {residual:.3e})")]
    PayloadConstraint { family: String, residual: f64 },

    #[error("tangent payload is zero")]
    ZeroTangent,

    #[error("matrix is zero")]
    ZeroMatrix,

    #[error("bad shape: {0}")]
    BadShape(String),

    #[error("combination is not a scalar matrix (residual {residual:.3e})")]
    NotScalar { residual: f64 },

    #[error("inputs are not normalized to A*A = I (residual {residual:.3e})")]
    NotNormalized { residual: f64 },

    #[error("matrix is not skew-symmetric (relative residual {residual:.3e})")]
    NotSkew { residual: f64 },

    #[error("eigenvalues of A*A do not pair up (residual {residual:.3e})")]
    PairingFailure { residual: f64 },

    #[error("coordinate vector has length {found}, expected {expected}")]
    BadLength { expected: usize, found: usize },

    #[error("unsupported size n = {0}")]
    BadSize(usize),

    #[error("invalid family: {0}")]
    BadFamily(String),

    #[error("element is not in the group (residual {residual:.3e})")]
    NotInGroup { residual: f64 },

    #[error("no closed-form group homomorphism for {0}")]
    NoClosedForm(String),

    #[error("curvature bound k must be non-positive, got {0}")]
    BadSign(f64),

    #[error("Higgs element violates the eigenspace conditions (residual {residual:.3e})")]
    EigenspaceViolation { residual: f64 },

    #[error("config error: {0}")]
    ConfigParse(String),

    #[error("failed to write report: {0}")]
    WriteFailure(String),
}

pub type Result<T> = std::result::Result<T, Error>;
