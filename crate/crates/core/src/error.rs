use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid extension: {0}")]
    InvalidExtension(String),

    #[error("element is not invertible: {0}")]
    NotInvertible(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("not divisible; remainder {remainder}")]
    NonDivisible { remainder: String },

    #[error("invalid substitution: {0}")]
    InvalidSubstitution(String),

    #[error("{line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    #[error("undeclared generator `{0}`")]
    UndeclaredGenerator(String),

    #[error("cyclic abbreviation `{0}`")]
    CyclicAbbreviation(String),

    #[error("invalid chain complex: {0}")]
    InvalidComplex(String),

    #[error("complex is not acyclic (homology ranks {0:?}) and no homology bases were given")]
    NotAcyclicWithoutBases(Vec<usize>),

    #[error("invalid homology basis in degree {degree}: {reason}")]
    InvalidHomologyBasis { degree: usize, reason: String },

    #[error("sequence is not exact: {0}")]
    NotExact(String),

    #[error("bases are not compatible: {0}")]
    IncompatibleBases(String),

    #[error("invalid representation: {0}")]
    InvalidRepresentation(String),

    #[error("determinant of {0} vanishes; try removing a different generator")]
    DegenerateDenominator(String),

    #[error("presentation has deficiency {0}, the determinant ratio needs deficiency one")]
    WrongDeficiency(i64),

    #[error("not unit-equivalent: {lhs} vs {rhs}")]
    NotUnitEquivalent { lhs: String, rhs: String },

    #[error("coefficients do not collapse to the base field: {0}")]
    CoefficientsDoNotCollapse(String),

    #[error("invalid character list: {0}")]
    InvalidCharacters(String),

    #[error("{0}")]
    InvalidInput(String),

    #[error("task `{task}`: {source}")]
    Task {
        task: String,
        #[source]
        source: Box<Error>,
    },

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn parse(line: usize, col: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, col, msg: msg.into() }
    }
}
