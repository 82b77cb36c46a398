use thiserror::Error;

/// Errors raised by matrix kernels, factorizations and bound checkers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not symmetric (asymmetry {asymmetry:e} exceeds {tolerance:e})")]
    NotSymmetric { asymmetry: f64, tolerance: f64 },

    #[error("matrix contains NaN or infinite entries")]
    NonFinite,

    #[error("entry buffer has length {len}, expected {rows}x{cols}")]
    ShapeMismatch { rows: usize, cols: usize, len: usize },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("matrix is not positive definite (min eigenvalue {min_eigenvalue:e})")]
    NotPositiveDefinite { min_eigenvalue: f64 },

    #[error("matrix is not invertible")]
    NotInvertible,

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("dimension {0} is odd; a symplectic structure needs an even dimension")]
    OddDimension(usize),

    #[error("number of modes must be at least one")]
    ZeroModes,

    #[error("Jacobi iteration did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("eigenspace pairing failed for mode {mode} (deviation {deviation:e})")]
    PairingFailure { mode: usize, deviation: f64 },

    #[error("spectrum is degenerate (gap {gap:e} below {tolerance:e})")]
    DegenerateSpectrum { gap: f64, tolerance: f64 },

    #[error("spectral subsets are not separated (distance {distance:e})")]
    ZeroGap { distance: f64 },

    #[error("parameter outside the validity range: {0}")]
    OutOfValidityRange(String),

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("covariance matrix violates the uncertainty relation (min symplectic eigenvalue {min_d:e})")]
    InvalidCovariance { min_d: f64 },

    #[error("covariance matrix is not in the interior (min symplectic eigenvalue {min_d:e})")]
    NotInterior { min_d: f64 },

    #[error("bad mode indices: {0}")]
    BadIndices(String),
}

pub type Result<T> = std::result::Result<T, Error>;
