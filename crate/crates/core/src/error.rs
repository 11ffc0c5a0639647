use thiserror::Error;

/// Errors produced by the tensor algebra, samplers and CUR assembly.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("shape mismatch in {op}: {detail}")]
    Shape { op: &'static str, detail: String },

    #[error("invalid index set: {0}")]
    Index(String),

    #[error("rank {rank} out of range 1..={max}")]
    Rank { rank: usize, max: usize },

    #[error("{0}")]
    Range(String),

    /// A Fourier-domain frontal slice (1-based) is numerically singular.
    #[error("spectral slice {slice} is singular (condition number {condition:e})")]
    Singular { slice: usize, condition: f64 },

    /// The interpolation submatrix became singular at a (1-based) selection step.
    #[error("degenerate selection at step {step}: {detail}")]
    Degenerate { step: usize, detail: String },

    #[error("sampling error: {0}")]
    Sampling(String),

    #[error("imaginary residue {residue:e} after inverse transform of a real-origin tensor")]
    ImaginaryResidue { residue: f64 },

    #[error("non-finite value at linear index {0}")]
    NonFinite(usize),

    #[error("format error: {0}")]
    Format(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
