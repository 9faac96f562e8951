//! Workbench configuration shared by the library entry points and the CLI.

use std::path::PathBuf;

use crate::error::{Error, Result};
use crate::scalar::{rat, Rational};

/// Environment variable naming the KL cache file.
pub const CACHE_ENV: &str = "WORKBENCH_CACHE";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WorkbenchConfig {
    pub n: usize,
    pub q: Rational,
    /// The modulus `N` of the unit lines `Z/N`.
    pub modulus: u32,
    /// Largest module dimension handed to the decomposition oracle.
    pub oracle_threshold: usize,
    pub cache_path: Option<PathBuf>,
}

impl Default for WorkbenchConfig {
    fn default() -> Self {
        WorkbenchConfig { n: 3, q: rat(3), modulus: 2, oracle_threshold: 240, cache_path: None }
    }
}

impl WorkbenchConfig {
    /// Defaults, with the cache path taken from the environment when set.
    pub fn from_env() -> Self {
        WorkbenchConfig { cache_path: std::env::var_os(CACHE_ENV).map(PathBuf::from), ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::BadInput("rank must be positive".into()));
        }
        if self.q <= rat(1) {
            return Err(Error::BadSpecialization(self.q.to_string()));
        }
        if self.modulus == 0 || self.modulus % 2 != 0 {
            return Err(Error::BadInput(format!("modulus {} must be even", self.modulus)));
        }
        let factorial: usize = (1..=self.n).product();
        if self.oracle_threshold < factorial {
            return Err(Error::BadInput(format!("oracle threshold {} is below {}! = {factorial}", self.oracle_threshold, self.n)));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        WorkbenchConfig::default().validate().unwrap();
        let odd = WorkbenchConfig { modulus: 3, ..Default::default() };
        assert!(odd.validate().is_err());
        let low = WorkbenchConfig { q: rat(1), ..Default::default() };
        assert!(matches!(low.validate(), Err(Error::BadSpecialization(_))));
        let small = WorkbenchConfig { n: 6, oracle_threshold: 100, ..Default::default() };
        assert!(small.validate().is_err());
    }
}
