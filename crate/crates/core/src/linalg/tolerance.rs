use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Environment variable that overrides [`TolerancePolicy::rel_zero`].
pub const DEFAULT_TOL_ENV: &str = "QIK_DEFAULT_TOL";

/// Shared zero, rank and eigenvalue tolerances.
///
/// Every "= 0" in the toolkit goes through [`TolerancePolicy::is_zero_norm`]
/// with a caller-supplied scale; there are no absolute epsilons elsewhere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TolerancePolicy {
    pub rel_zero: f64,
    pub rank_rel: f64,
    pub eig_match: f64,
}

impl Default for TolerancePolicy {
    fn default() -> Self {
        Self {
            rel_zero: 1e-9,
            rank_rel: 1e-10,
            eig_match: 1e-8,
        }
    }
}

impl TolerancePolicy {
    pub fn new(rel_zero: f64, rank_rel: f64, eig_match: f64) -> Result<Self> {
        let policy = Self {
            rel_zero,
            rank_rel,
            eig_match,
        };
        policy.validate()?;
        Ok(policy)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("rel_zero", self.rel_zero),
            ("rank_rel", self.rank_rel),
            ("eig_match", self.eig_match),
        ] {
            if !(value > 0.0 && value < 1e-2) {
                return Err(Error::InvalidTolerance(format!(
                    "{name} = {value} must lie in (0, 1e-2)"
                )));
            }
        }
        Ok(())
    }

    /// Default policy with `rel_zero` taken from `QIK_DEFAULT_TOL` when set.
    pub fn from_env() -> Result<Self> {
        let mut policy = Self::default();
        if let Ok(raw) = std::env::var(DEFAULT_TOL_ENV) {
            policy.rel_zero = raw
                .trim()
                .parse()
                .map_err(|_| Error::InvalidTolerance(format!("{DEFAULT_TOL_ENV}={raw} is not a number")))?;
            policy.validate()?;
        }
        Ok(policy)
    }

    pub fn with_rel_zero(mut self, rel_zero: f64) -> Result<Self> {
        self.rel_zero = rel_zero;
        self.validate()?;
        Ok(self)
    }

    /// Multiplies every tolerance by `factor`, without re-validating the bound.
    pub fn loosened(self, factor: f64) -> Self {
        Self {
            rel_zero: self.rel_zero * factor,
            rank_rel: self.rank_rel * factor,
            eig_match: self.eig_match * factor,
        }
    }

    pub fn is_zero_norm(&self, frobenius: f64, scale: f64) -> bool {
        frobenius <= self.rel_zero * scale
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        TolerancePolicy::default().validate().unwrap();
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(TolerancePolicy::new(0.0, 1e-10, 1e-8).is_err());
        assert!(TolerancePolicy::new(1e-9, 0.5, 1e-8).is_err());
        assert!(TolerancePolicy::new(1e-9, 1e-10, -1.0).is_err());
        assert!(TolerancePolicy::new(1e-9, 1e-10, f64::NAN).is_err());
    }
}
