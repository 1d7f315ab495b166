use thiserror::Error;

pub type Result<T, E = BmtError> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BmtError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("weight {0:?} is not dominant")]
    NotDominant(Vec<i64>),

    #[error("weight {0:?} is not regular")]
    NotRegular(Vec<i64>),

    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),

    #[error("{0} is not a prime power")]
    NotPrimePower(u64),

    #[error("type is defined for p = {type_p}, engine works at p = {engine_p}")]
    PrimeMismatch { type_p: u32, engine_p: u32 },

    /// The Brauer-character system had no small non-negative integral solution.
    /// Either the input was not the character of a representation or the
    /// arithmetic domain is broken.
    #[error("arithmetic fault (moduli {moduli:?}): {detail}")]
    ArithmeticFault { moduli: [u64; 2], detail: String },

    #[error("lift choices disagree for sigma = {sigma}: {values:?}")]
    ChoiceDisagreement { sigma: u32, values: Vec<i64> },

    #[error("cycles indexed by {first} and {second} share the point {label}")]
    OverlappingSupports { first: String, second: String, label: String },

    #[error("cycle basis has no entry for weight {0}")]
    MissingBasisEntry(String),

    #[error("failed to parse {what}: {detail}")]
    Parse { what: &'static str, detail: String },
}

impl BmtError {
    /// Whether the error stems from bad input rather than a failed computation.
    pub fn is_usage(&self) -> bool {
        !matches!(
            self,
            BmtError::ArithmeticFault { .. }
                | BmtError::ChoiceDisagreement { .. }
                | BmtError::OverlappingSupports { .. }
                | BmtError::MissingBasisEntry(_)
        )
    }
}
