use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid lattice specification: {0}")]
    InvalidLattice(String),

    #[error("hopping amplitude {value} exceeds 1 in modulus ({context})")]
    AmplitudeTooLarge { value: f64, context: String },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("refusing to materialize {qubits}-qubit operator (cap is {cap})")]
    TooLarge { qubits: u32, cap: u32 },

    #[error("matrix norm {norm} exceeds 1; cannot dilate")]
    NotContraction { norm: f64 },

    #[error("block is not Hermitian (asymmetry {asymmetry:e})")]
    NotHermitian { asymmetry: f64 },

    #[error("polynomial reaches |p(x)| = {max_abs} > 1/2 on [-1, 1]")]
    PolynomialTooLarge { max_abs: f64 },

    #[error("non-finite target value at x = {x}")]
    NonFinite { x: f64 },

    #[error("degree {degree} certifies {bound:e}, above the requested {target:e}")]
    DegreeInsufficient {
        degree: usize,
        bound: f64,
        target: f64,
    },

    #[error("gate {index} is not unitary (deviation {deviation:e})")]
    NonUnitaryGate { index: usize, deviation: f64 },

    #[error("Hamiltonian has no terms")]
    NoTerms,

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{}", format_config_errors(.0))]
    Config(Vec<String>),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

fn format_config_errors(errors: &[String]) -> String {
    let mut out = format!("{} configuration error(s):", errors.len());
    for e in errors {
        out.push_str("\n  - ");
        out.push_str(e);
    }
    out
}

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
