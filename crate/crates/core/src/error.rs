use thiserror::Error;

/// Errors raised by waveform construction and analysis.
#[derive(Debug, Error)]
pub enum Error {
    #[error("Fourier coefficient of carrier {carrier} has imaginary residue {residue:e}; input is not conjugate-symmetric")]
    NonRealCoefficients { carrier: usize, residue: f64 },

    #[error("symbol at index 0 is {magnitude:e} in magnitude; the DC term must be zero")]
    ZeroDcViolation { magnitude: f64 },

    #[error("{what} = {value} lies outside the support |{what}| <= {limit}")]
    OutOfSupport {
        what: &'static str,
        value: f64,
        limit: f64,
    },

    #[error("sampling rate {fs} Hz is below the oversampling floor {floor} Hz")]
    Undersampled { fs: f64, floor: f64 },

    #[error("truncation order would exceed {cap} without meeting tolerance {tol:e}")]
    TruncationFailure { cap: usize, tol: f64 },

    #[error("ellipse is degenerate: normalized coupling {rho_norm} has magnitude >= 1")]
    DegenerateEllipse { rho_norm: f64 },

    #[error("invalid waveform: {0}")]
    InvalidSpec(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
