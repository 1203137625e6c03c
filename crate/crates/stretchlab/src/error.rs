use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid potential: {0}")]
    InvalidPotential(String),

    #[error("x = {x} is not a stationary point (|psi'| = {derivative:e}, allowed {tolerance:e})")]
    NotStationary {
        x: f64,
        derivative: f64,
        tolerance: f64,
    },

    #[error("[{lo}, {hi}] is not a constant plateau of the potential")]
    NotPlateau { lo: f64, hi: f64 },

    #[error("wavefunction vanishes identically")]
    ZeroWavefunction,

    #[error("grid too coarse: {0}")]
    GridTooCoarse(String),

    #[error("only {found} bound states below the confinement limit, {requested} requested")]
    InsufficientBoundStates { found: usize, requested: usize },

    #[error("energy {energy} is outside the validity range of {condition}")]
    OutOfBranch { condition: String, energy: f64 },

    #[error("scan ceiling E = {ceiling} reached with {found} of {requested} levels")]
    ScanCeiling {
        ceiling: f64,
        found: usize,
        requested: usize,
    },

    #[error("energy {energy} is not an eigenvalue (junction mismatch {mismatch:e})")]
    NotARoot { energy: f64, mismatch: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("gamma function pole at {0}")]
    GammaPole(f64),

    #[error("outside the supported envelope: {0}")]
    OutOfEnvelope(String),

    #[error("adiabatic bound inapplicable where |L'| = {0} >= 1")]
    SlopeTooLarge(f64),

    #[error("json: {0}")]
    Json(String),

    #[error("io: {0}")]
    Io(String),

    #[error("at {point}: {source}")]
    AtPoint {
        point: String,
        #[source]
        source: Box<Error>,
    },

    #[error("internal: {0}")]
    Internal(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl Error {
    /// Attaches the sweep point or location at which the error occurred.
    pub fn at(self, point: impl Into<String>) -> Error {
        Error::AtPoint {
            point: point.into(),
            source: Box::new(self),
        }
    }

    /// The innermost error, skipping location context.
    pub fn root(&self) -> &Error {
        match self {
            Error::AtPoint { source, .. } => source.root(),
            e => e,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
