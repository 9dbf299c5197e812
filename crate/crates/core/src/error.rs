use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("order must be at least 2")]
    OrderTooSmall,

    #[error("divisor lattice too large: {classes} classes exceeds cap of {cap}")]
    LatticeTooLarge { classes: u128, cap: usize },

    #[error("arithmetic overflow")]
    Overflow,

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("no second prime")]
    NoSecondPrime,

    #[error("complete graph has no cut-set")]
    CompleteGraph,

    #[error("empty residual graph")]
    EmptyResidual,

    #[error("instance too large for exhaustive oracle ({classes} classes, limit {limit})")]
    ExhaustiveLimit { classes: usize, limit: usize },

    /// A closed form disagreed with enumeration, or a proven cut-set failed
    /// to disconnect. Either one means the implementation is wrong.
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }
}
