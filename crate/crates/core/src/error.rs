use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument or parameter combination outside the supported range.
    #[error("domain error: {0}")]
    Domain(String),

    /// Exact 128-bit arithmetic overflowed.
    #[error("overflow in exact arithmetic while computing {0}")]
    Overflow(&'static str),

    /// The requested lattice is larger than the configured term budget.
    #[error("term budget exceeded: {terms} terms requested, budget is {budget}")]
    Budget { terms: u128, budget: u128 },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
