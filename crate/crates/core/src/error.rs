use thiserror::Error;

use crate::poly::VarId;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("the ideal is the unit ideal")]
    UnitIdeal,
    #[error("level {n} is smaller than required level {required}")]
    LevelTooSmall { n: u32, required: u32 },
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("basis has no Gröbner flag")]
    NotGroebner,
    #[error("variable {0} is outside the ideal's universe")]
    ForeignVariable(VarId),
    #[error("level {0} has not been built")]
    LevelNotBuilt(u32),
    #[error("tower did not stabilize within {levels} levels")]
    NotStabilized { levels: u32 },
    #[error("ambient mismatch: {0}")]
    AmbientMismatch(String),
    #[error("generator {0} is neither group-like nor primitive")]
    UnrecognizedGeneratorType(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("irreducible factor of degree {degree} exceeds cap {cap}")]
    FactorDegreeExceeded { degree: usize, cap: usize },
    #[error("group is not a free torus: {0}")]
    NotATorus(String),
    #[error("coefficient {0} is not a combination of characters")]
    NotCharacterCoefficients(String),
    #[error("{0} is not invertible modulo the source ideal")]
    NotInvertible(String),
    #[error("parse error at {position}: expected {}", expected.join(" | "))]
    Parse {
        position: usize,
        expected: Vec<String>,
    },
    #[error("invalid input: {0}")]
    InvalidSpec(String),
}

pub type Result<T> = std::result::Result<T, Error>;
