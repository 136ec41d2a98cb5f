use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use wcop::{Error, Result};

pub const MAX_N: usize = 512;

/// Truncation and reporting settings, merged from an optional JSON file and
/// command-line flags (flags win).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    #[serde(rename = "N")]
    pub n: usize,
    /// Defaults to `N/2` when absent.
    #[serde(rename = "M")]
    pub m: Option<usize>,
    pub tol: f64,
    pub eigen_k: usize,
    pub output: Option<PathBuf>,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self { n: 96, m: None, tol: 1e-6, eigen_k: 5, output: None, seed: wcop::suite::SuiteConfig::default().seed }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub n: Option<usize>,
    pub m: Option<usize>,
    pub tol: Option<f64>,
    pub eigen_k: Option<usize>,
    pub output: Option<PathBuf>,
    pub seed: Option<u64>,
}

impl RunConfig {
    pub fn load(path: Option<&Path>, over: Overrides) -> Result<Self> {
        let mut cfg = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| Error::Parse(format!("cannot read config {}: {e}", p.display())))?;
                serde_json::from_str(&text).map_err(|e| Error::Parse(format!("invalid config {}: {e}", p.display())))?
            }
            None => RunConfig::default(),
        };
        cfg.n = over.n.unwrap_or(cfg.n);
        cfg.m = over.m.or(cfg.m);
        cfg.tol = over.tol.unwrap_or(cfg.tol);
        cfg.eigen_k = over.eigen_k.unwrap_or(cfg.eigen_k);
        cfg.output = over.output.or(cfg.output);
        cfg.seed = over.seed.unwrap_or(cfg.seed);
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 || self.n > MAX_N {
            return Err(Error::Domain(format!("N = {} must lie in 2..={MAX_N}", self.n)));
        }
        let m = self.block();
        if m < 1 || m > self.n / 2 {
            return Err(Error::Domain(format!("M = {m} must lie in 1..={}", self.n / 2)));
        }
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(Error::Domain(format!("tol = {} must be positive", self.tol)));
        }
        if self.eigen_k == 0 {
            return Err(Error::Domain("eigen_k must be at least 1".into()));
        }
        Ok(())
    }

    pub fn block(&self) -> usize {
        self.m.unwrap_or(self.n / 2)
    }
}
