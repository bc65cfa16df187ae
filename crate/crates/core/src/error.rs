use thiserror::Error;

/// Errors raised by the simulation and statistics routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Inconsistent sizes or parameters supplied by the caller.
    #[error("configuration error: {0}")]
    Config(String),

    #[error("site {site} out of range for {num_qubits} qubits (arity {arity})")]
    SiteOutOfRange {
        site: usize,
        arity: usize,
        num_qubits: usize,
    },

    #[error("matrix is not unitary: max |U^dag U - I| = {deviation:.3e}")]
    NonUnitary { deviation: f64 },

    #[error("invalid matchgate: det(A) = {det_a}, det(B) = {det_b}")]
    InvalidMatchgate { det_a: String, det_b: String },

    #[error("cut {cut} out of range for {num_qubits} qubits")]
    CutOutOfRange { cut: usize, num_qubits: usize },

    #[error("invalid spectrum: {0}")]
    InvalidSpectrum(String),

    /// A Majorana operator conjugated by the gate is not a linear combination
    /// of single Majorana operators.
    #[error("gate is not Gaussian: conjugated Majorana c_{index} has weight {leakage:.3e} outside the single-Majorana span")]
    NonGaussian { index: usize, leakage: f64 },

    #[error("gate at layer {layer} is not Clifford")]
    NonClifford { layer: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("histograms have mismatched bins")]
    BinMismatch,

    #[error("distribution is not normalized (total mass {0})")]
    Unnormalized(f64),

    #[error("empty input: {0}")]
    Empty(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
