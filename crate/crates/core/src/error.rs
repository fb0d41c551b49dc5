use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("characteristic {0} is not prime")]
    NonPrimeCharacteristic(u64),
    #[error("no irreducible polynomial of degree {k} over GF({p})")]
    NoIrreducibleFound { p: u64, k: u32 },
    #[error("field size {p}^{k} exceeds 2^20")]
    FieldTooLarge { p: u64, k: u32 },
    #[error("group order {order} exceeds the enumeration cap {cap}")]
    CapExceeded { order: u64, cap: u64 },
    #[error("elements belong to different groups")]
    MixedGroups,
    #[error("element not in group: {0}")]
    NotInGroup(String),
    #[error("malformed group spec `{0}`")]
    SpecSyntax(String),
    #[error("unsupported parameters: {0}")]
    UnsupportedParameters(String),
    #[error("no prime P = 1 mod {exponent} with P > {lower} below 2^31")]
    NoSuitablePrime { exponent: u64, lower: u64 },
    #[error("eigenspace splitting stalled on a block of dimension {dim} (classes {classes:?})")]
    EigensplitFailure { dim: usize, classes: Vec<usize> },
    #[error("degree recovery failed for character {index}: {reason}")]
    DegreeRecovery { index: usize, reason: String },
    #[error("work estimate {needed} exceeds loop budget {budget}")]
    LoopBudgetExceeded { needed: u128, budget: u128 },
    #[error("arity mismatch: {0} vs {1}")]
    ArityMismatch(usize, usize),
    #[error("probe ({a:?}, {b:?}) lies in no rectangle")]
    UncoveredProbe { a: Vec<u32>, b: Vec<u32> },
    #[error("invalid protocol: {0}")]
    InvalidProtocol(String),
    #[error("invalid tuple set: {0}")]
    InvalidTupleSet(String),
    #[error("class index {0} out of range")]
    InvalidClass(usize),
    #[error("invalid coupling: {0}")]
    InvalidCoupling(String),
    #[error("character bound violated: fraction {fraction} <= 2 - zeta = {bound}")]
    CharBoundViolated { fraction: f64, bound: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },
}

impl Error {
    /// Stable machine-readable code, also used as the CLI exit status.
    pub fn code(&self) -> i32 {
        match self {
            Error::NonPrimeCharacteristic(_) => 10,
            Error::NoIrreducibleFound { .. } => 11,
            Error::FieldTooLarge { .. } => 12,
            Error::CapExceeded { .. } => 13,
            Error::MixedGroups => 14,
            Error::NotInGroup(_) => 15,
            Error::SpecSyntax(_) => 16,
            Error::UnsupportedParameters(_) => 17,
            Error::NoSuitablePrime { .. } => 20,
            Error::EigensplitFailure { .. } => 21,
            Error::DegreeRecovery { .. } => 22,
            Error::LoopBudgetExceeded { .. } => 30,
            Error::ArityMismatch(..) => 31,
            Error::UncoveredProbe { .. } => 32,
            Error::InvalidProtocol(_) => 33,
            Error::InvalidTupleSet(_) => 34,
            Error::InvalidClass(_) => 35,
            Error::InvalidCoupling(_) => 36,
            Error::CharBoundViolated { .. } => 37,
            Error::InvalidArgument(_) => 40,
            Error::Io { .. } => 50,
            Error::Parse { .. } => 51,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
