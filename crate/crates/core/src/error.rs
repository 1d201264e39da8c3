use thiserror::Error;

/// Errors raised by geometry, kernel, oracle and validation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid domain specification: {0}")]
    InvalidSpec(String),
    #[error("{0}")]
    InvalidEps(String),
    #[error("point {0:?} is not inside the domain")]
    NotInDomain(Vec<f64>),
    #[error("nearest boundary point is ambiguous; candidate parameters {candidates:?}")]
    AmbiguousProjection { candidates: Vec<f64> },
    #[error("boundary {0} is not available for this domain")]
    UnsupportedBoundary(String),
    #[error("grid constraints eliminate every pair")]
    EmptyGrid,
    #[error("kernel is singular at coincident points")]
    Singular,
    #[error("argument {0:?} lies inside the hole")]
    OutsideExterior(Vec<f64>),
    #[error("expected a {expected}D point, got {got}D")]
    WrongDimension { expected: usize, got: usize },
    #[error("series did not converge within {0} terms")]
    TruncationFailure(usize),
    #[error("point is outside the boundary strip of width {0}")]
    OutsideStrip(f64),
    #[error("point {0:?} is not in the perforated domain")]
    NotInPerforatedDomain(Vec<f64>),
    #[error("log-capacity denominator {0:e} is degenerate")]
    DenominatorDegenerate(f64),
    #[error("constraint violated: {0}")]
    ConstraintViolated(String),
    #[error("holes overlap or leave the outer domain")]
    HolesOverlap,
    #[error("point {0:?} is not in the rod")]
    NotInRod(Vec<f64>),
    #[error("point {0:?} is not in the truncated sector")]
    NotInTruncatedSector(Vec<f64>),
    #[error("boundary quadrature under-resolved: doubling changed the integral by {0:e}")]
    QuadratureUnderResolved(f64),
    #[error("bad radii: {0}")]
    BadRadii(String),
    #[error("discrete system ill-conditioned: residual {0:e}")]
    IllConditioned(f64),
    #[error("unsupported configuration: {0}")]
    Unsupported(String),
    #[error("need at least {needed} rows with positive error, found {found}")]
    InsufficientData { needed: usize, found: usize },
    #[error("error is identically zero: the formula is exact on this data")]
    ZeroError,
    #[error("error table has no rows for stratum {0}")]
    MissingStratum(String),
    #[error("at pair x={x:?}, y={y:?}: {source}")]
    AtPair {
        x: Vec<f64>,
        y: Vec<f64>,
        #[source]
        source: Box<Error>,
    },
    #[error("io: {0}")]
    Io(String),
}

impl Error {
    /// True for failures of the numerical machinery itself (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::TruncationFailure(_)
            | Error::IllConditioned(_)
            | Error::QuadratureUnderResolved(_)
            | Error::DenominatorDegenerate(_) => true,
            Error::AtPair { source, .. } => source.is_numerical(),
            _ => false,
        }
    }

    pub(crate) fn at_pair(self, x: &[f64], y: &[f64]) -> Error {
        Error::AtPair {
            x: x.to_vec(),
            y: y.to_vec(),
            source: Box::new(self),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
