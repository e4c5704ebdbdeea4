use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("non-reduced rational '{0}'")]
    NonReducedRational(String),
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("schema violation: {}", .0.join("; "))]
    Schema(Vec<String>),
    #[error("ambient dimensions differ ({0} vs {1})")]
    AmbientMismatch(usize, usize),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not nilpotent")]
    NotNilpotent,
    #[error("matrix is not unipotent")]
    NotUnipotent,
    #[error("matrix is singular")]
    Singular,
    #[error("linear system has no solution")]
    Inconsistent,
    #[error("linear system has a {0}-dimensional solution space")]
    NotUnique(usize),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("unsupported weight shape: {0}")]
    UnsupportedShape(String),
    #[error("relative weight filtration does not exist: {0}")]
    Nonexistence(String),
    #[error("not a mixed Hodge structure: Gr_{k} fails at p = {p}")]
    InvalidMhs { k: i32, p: i32 },
    #[error("filtration outside the chart: {0}")]
    OutOfChart(String),
    #[error("splitting correction fails at depth {0}")]
    SplittingFailure(i32),
    #[error("point outside the germ radius")]
    OutOfRadius,
    #[error("invalid germ: {0}")]
    InvalidGerm(String),
    #[error("center is not a zero (lattice distance {distance}); no zeros within radius {empty_radius}")]
    NotAZeroAtCenter { distance: f64, empty_radius: f64 },
    #[error("non-admissible germ: {0}")]
    NonAdmissible(String),
    #[error("extrapolation does not converge (estimate {estimate:e})")]
    NonConvergence { estimate: f64 },
    #[error("integrality undecided: lattice distance {distance:e} within error {error:e}")]
    UndecidedIntegrality { distance: f64, error: f64 },
    #[error("consistency check failed: {0}")]
    Consistency(String),
    #[error("ill-conditioned grading solve (condition estimate {condition:e})")]
    IllConditioned { condition: f64 },
    #[error("precision underflow evaluating the period map")]
    PrecisionUnderflow,
    #[error("root isolation failed: {0}")]
    RootIsolation(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Outcomes that are mathematical answers rather than bad input.
    pub fn is_mathematical(&self) -> bool {
        matches!(
            self,
            Error::NonAdmissible(_) | Error::NotAZeroAtCenter { .. } | Error::UndecidedIntegrality { .. }
        )
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse(_) => "Parse",
            Error::NonReducedRational(_) => "NonReducedRational",
            Error::Syntax { .. } => "Syntax",
            Error::Schema(_) => "Schema",
            Error::AmbientMismatch(..) => "AmbientMismatch",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::NotNilpotent => "NotNilpotent",
            Error::NotUnipotent => "NotUnipotent",
            Error::Singular => "Singular",
            Error::Inconsistent => "Inconsistent",
            Error::NotUnique(_) => "NotUnique",
            Error::Precondition(_) => "Precondition",
            Error::UnsupportedShape(_) => "UnsupportedShape",
            Error::Nonexistence(_) => "Nonexistence",
            Error::InvalidMhs { .. } => "InvalidMhs",
            Error::OutOfChart(_) => "OutOfChart",
            Error::SplittingFailure(_) => "SplittingFailure",
            Error::OutOfRadius => "OutOfRadius",
            Error::InvalidGerm(_) => "InvalidGerm",
            Error::NotAZeroAtCenter { .. } => "NotAZeroAtCenter",
            Error::NonAdmissible(_) => "NonAdmissible",
            Error::NonConvergence { .. } => "NonConvergence",
            Error::UndecidedIntegrality { .. } => "UndecidedIntegrality",
            Error::Consistency(_) => "Consistency",
            Error::IllConditioned { .. } => "IllConditioned",
            Error::PrecisionUnderflow => "PrecisionUnderflow",
            Error::RootIsolation(_) => "RootIsolation",
            Error::Io(_) => "Io",
        }
    }
}
