use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("band limit {requested} exceeds L_max = {max} (set TEXRADON_LMAX to raise it, up to {hard})")]
    BandLimit {
        requested: usize,
        max: usize,
        hard: usize,
    },

    #[error("harmonic index out of range: l={l}, m={m}, n={n}")]
    IndexOutOfRange { l: usize, m: i64, n: i64 },

    #[error("non-finite function value at quadrature node {node} ({context})")]
    NonFinite { node: usize, context: &'static str },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("rank-deficient reconstruction: {message}")]
    RankDeficient {
        message: String,
        /// Harmonic degrees whose coefficients are not determined by the data.
        degrees: Vec<usize>,
    },

    #[error("calibration drift at degree {degree}: measured {measured:.3e}, frozen {frozen:.3e}")]
    Calibration {
        degree: usize,
        measured: f64,
        frozen: f64,
    },

    #[error("dual symbol is not scalar at degree {degree}: off-diagonal response {response:.3e}")]
    NonScalarSymbol { degree: usize, response: f64 },

    #[error("{message} (suggested minimum band limit: {suggested_bandlimit})")]
    Model {
        message: String,
        suggested_bandlimit: usize,
    },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
