use crate::error::{Error, Result};

/// Default cap on candidate families visited by a single enumeration.
pub const DEFAULT_BUDGET: u64 = 1_000_000;

/// Environment variable overriding [`DEFAULT_BUDGET`].
pub const BUDGET_ENV: &str = "FINITOPOS_BUDGET";

/// Upper bound on the number of search nodes an enumeration may visit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    limit: u64,
}

impl Budget {
    pub fn new(limit: u64) -> Self {
        Self { limit }
    }

    /// Reads `FINITOPOS_BUDGET`, falling back to the default on absence or garbage.
    pub fn from_env() -> Self {
        std::env::var(BUDGET_ENV)
            .ok()
            .and_then(|s| s.trim().parse().ok())
            .map(Self::new)
            .unwrap_or_default()
    }

    pub fn unlimited() -> Self {
        Self { limit: u64::MAX }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn meter(&self) -> Meter {
        Meter {
            limit: self.limit,
            used: 0,
        }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Self::new(DEFAULT_BUDGET)
    }
}

/// Running count against a [`Budget`].
#[derive(Debug)]
pub struct Meter {
    limit: u64,
    used: u64,
}

impl Meter {
    #[inline]
    pub fn tick(&mut self) -> Result<()> {
        self.used += 1;
        if self.used > self.limit {
            Err(Error::BudgetExceeded { limit: self.limit })
        } else {
            Ok(())
        }
    }

    pub fn used(&self) -> u64 {
        self.used
    }
}
