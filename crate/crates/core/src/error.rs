use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("state vector cannot be normalized (zero or non-finite norm)")]
    NotNormalizable,
    #[error("states are linearly dependent: squared overlap {0} exceeds 1 - 1e-10")]
    LinearlyDependent(f64),
    #[error("occurrence probability eta1 = {0} must lie strictly between 0 and 1")]
    DegeneratePrior(f64),
    #[error("error margin {0} must lie in [0, 1]")]
    MarginOutOfRange(f64),
    #[error("minimum-error direction is degenerate (|eta1 n1 - eta2 n2| = {0})")]
    DegenerateDirection(f64),
    #[error("margin {m} outside the {domain} domain [{lo}, {hi}]")]
    OutOfDomain { domain: &'static str, m: f64, lo: f64, hi: f64 },
    #[error("zero margin needs the unambiguous construction, not the intermediate one")]
    MarginZeroDegenerate,
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("not a density matrix: {0}")]
    NotAState(String),
    #[error("operation supports qubits only, got dimension {0}")]
    DimensionUnsupported(usize),
    #[error("search found no feasible measurement")]
    NoFeasiblePoint,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: String,
        #[source]
        source: serde_json::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
