//! Cap on the size of materialized exponents.
//!
//! Family exponents are `2^(2^n)`, so the number of bits grows as `2^n + 1`.
//! Everything that turns an index into an integer goes through an
//! [`ExponentBudget`] first.

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};

pub const BUDGET_ENV_VAR: &str = "SCG_EXPONENT_BUDGET_BITS";
pub const DEFAULT_BUDGET_BITS: u64 = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExponentBudget {
    pub max_bits: u64,
}

impl Default for ExponentBudget {
    fn default() -> Self {
        Self {
            max_bits: DEFAULT_BUDGET_BITS,
        }
    }
}

impl ExponentBudget {
    pub fn new(max_bits: u64) -> Self {
        Self { max_bits }
    }

    /// Reads `SCG_EXPONENT_BUDGET_BITS`, falling back to the default when the
    /// variable is unset or unparsable.
    pub fn from_env() -> Self {
        std::env::var(BUDGET_ENV_VAR)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .map(Self::new)
            .unwrap_or_default()
    }

    pub fn check_bits(&self, needed: u64) -> Result<()> {
        if needed > self.max_bits {
            return Err(Error::Budget {
                needed: needed.to_string(),
                budget: self.max_bits,
            });
        }
        Ok(())
    }

    /// `2^(2^n)`.
    pub fn double_exp(&self, n: u64) -> Result<BigUint> {
        if n >= 63 {
            return Err(Error::Budget {
                needed: format!("2^{n}+1"),
                budget: self.max_bits,
            });
        }
        let e = 1u64 << n;
        self.check_bits(e + 1)?;
        Ok(BigUint::one() << e)
    }
}

/// Bit length of `2^(2^n)` without materializing it; `None` when it does not
/// fit in a `u64`.
pub fn double_exp_bits(n: u64) -> Option<u64> {
    if n >= 63 {
        None
    } else {
        Some((1u64 << n) + 1)
    }
}
