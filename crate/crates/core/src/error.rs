use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian: entry ({row}, {col}) differs from its mirror by {deviation:e}")]
    NotHermitian {
        row: usize,
        col: usize,
        deviation: f64,
    },

    #[error("matrix is not symmetric: entry ({row}, {col}) differs from its mirror by {deviation:e}")]
    NotSymmetric {
        row: usize,
        col: usize,
        deviation: f64,
    },

    #[error("unsupported matrix dimension {0}")]
    UnsupportedDimension(usize),

    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("correlation coefficient t[{n}][{m}] has imaginary part {imag:e}")]
    ComplexCorrelation { n: usize, m: usize, imag: f64 },

    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },

    #[error("density matrix violates `{property}` (deviation {deviation:e})")]
    InvalidDensityMatrix {
        property: &'static str,
        deviation: f64,
    },

    #[error("expected degenerate pair nu2 = nu3, smallest gap is {gap:e} (nu = {nu:?})")]
    NotDegenerate { gap: f64, nu: [f64; 3] },

    #[error("grid truncation: {0}")]
    Truncation(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("state leaves the single-excitation sector: {0}")]
    OutsideSector(String),
}

pub type Result<T> = std::result::Result<T, Error>;
