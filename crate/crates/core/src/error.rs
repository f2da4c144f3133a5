use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("quota: must be > 0, got {0}")]
    NonPositiveQuota(f64),
    #[error("quota: must be < 1, got {0}")]
    QuotaNotBelowOne(f64),
    #[error("majors[{index}]: weight must be > 0, got {weight}")]
    NonPositiveMajorWeight { index: usize, weight: f64 },
    #[error("ocean: weight must be >= 0, got {0}")]
    NegativeOcean(f64),
    #[error("{field}: weight must be finite")]
    NonFiniteWeight { field: String },
    #[error("game has zero total resources")]
    EmptyGame,

    #[error("OceanlessGame: ocean weight is zero")]
    OceanlessGame,
    #[error("UnsupportedShape: {0}")]
    UnsupportedShape(String),
    #[error(
        "NotInteriorCase: requires r(M) < 1/2 <= ocean, got r(M) = {majors_total}, ocean = {ocean}"
    )]
    NotInteriorCase { majors_total: f64, ocean: f64 },
    #[error("TooManyMajors: {count} majors exceeds the limit of {limit}")]
    TooManyMajors { count: usize, limit: usize },
    #[error("Overflow: coefficient c_{0} does not fit in 64-bit integers")]
    CoefficientOverflow(usize),
    #[error("ZeroAtoms: ocean weight is positive but no atoms were requested")]
    ZeroAtoms,
    #[error("Intractable: {0}")]
    Intractable(String),
    #[error("HypothesisViolated: {0}")]
    HypothesisViolated(String),

    #[error("grid: value {value} outside ({lo}, {hi})")]
    GridOutOfRange { value: f64, lo: f64, hi: f64 },
    #[error("shares: total {0} exceeds 100")]
    SharesExceedTotal(f64),
    #[error("snapshot: no entities")]
    EmptySnapshot,
    #[error("line {line}: malformed row: {reason}")]
    MalformedRow { line: u64, reason: String },
    #[error("line {line}: duplicate entity {name:?}")]
    DuplicateEntity { line: u64, name: String },
    #[error("{0}")]
    Parse(String),
    #[error("io: {0}")]
    Io(String),
}

impl Error {
    /// Errors raised because a method's preconditions do not hold for an
    /// otherwise valid game. The CLI maps these to exit code 2.
    pub fn is_method_hypothesis(&self) -> bool {
        matches!(
            self,
            Error::OceanlessGame
                | Error::UnsupportedShape(_)
                | Error::NotInteriorCase { .. }
                | Error::TooManyMajors { .. }
                | Error::CoefficientOverflow(_)
                | Error::Intractable(_)
                | Error::HypothesisViolated(_)
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
