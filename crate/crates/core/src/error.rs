use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A computation stepped outside the declared window of an infinite space.
    #[error("region overflow: {0} lies outside the declared window")]
    RegionOverflow(String),

    #[error("budget exceeded: {what} needs {needed} enumerations, budget is {budget}")]
    BudgetExceeded { what: String, needed: u128, budget: u64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("neighbourhood is not closed under the stabiliser (missing {missing} cosets)")]
    NotStabiliserClosed { missing: usize },

    #[error("set of states must be non-empty")]
    EmptyStates,

    #[error("invalid configuration: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn budget(what: impl Into<String>, needed: u128, budget: u64) -> Self {
        Error::BudgetExceeded {
            what: what.into(),
            needed,
            budget,
        }
    }
}

/// `base^exp` saturating at `u128::MAX`.
pub(crate) fn checked_power(base: u64, exp: usize) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = match acc.checked_mul(base as u128) {
            Some(v) => v,
            None => return u128::MAX,
        };
    }
    acc
}

/// Fails with `BudgetExceeded` unless `q^n <= budget`; returns `q^n`.
pub(crate) fn ensure_enumerable(what: &str, q: u8, n: usize, budget: u64) -> Result<u64> {
    let needed = checked_power(q as u64, n);
    if needed > budget as u128 {
        return Err(Error::budget(what, needed, budget));
    }
    Ok(needed as u64)
}
