use thiserror::Error;

/// Errors produced by construction and validation across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid density: {0}")]
    InvalidDensity(String),

    #[error("particle count must be even and >= 2, got {0}")]
    OddParticleCount(usize),

    #[error("positions must be strictly increasing and positive: {0}")]
    InvalidPositions(String),

    #[error("pdf not available for this density")]
    PdfUnavailable,

    #[error("urn parameters out of range: n={n}, r={r}")]
    InvalidUrn { n: usize, r: usize },

    #[error("exact pmf cap exceeded: n={n} > cap={cap}")]
    PmfCapExceeded { n: usize, cap: usize },

    #[error("mgf overflow guard: |z|*sqrt(n) = {0} exceeds cap {1}")]
    MgfOverflow(f64, f64),

    #[error("parity violation: n={n}, terminal count {x}")]
    ParityViolation { n: usize, x: usize },

    #[error("invalid thinning spec: {0}")]
    InvalidThinning(String),

    #[error("exact enumeration cap exceeded: C({r},{s}) > {cap}")]
    EnumerationCapExceeded { r: usize, s: usize, cap: u64 },

    #[error("oracle support cap exceeded: {0} atoms > 8")]
    OracleCapExceeded(usize),

    #[error("invalid experiment config: {0}")]
    InvalidConfig(String),

    #[error("unknown experiment: {0}")]
    UnknownExperiment(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
