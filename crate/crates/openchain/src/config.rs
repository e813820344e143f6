//! Run configuration: JSON with complex scalars as [re, im] arrays and
//! tagged boundary parameterizations, so configs and reports round-trip
//! bit-exactly.

use crate::bethe::SolverConfig;
use crate::error::{Error, Result};
use crate::scalar::{BoundarySpec, ModelParams};
use crate::serde_c64;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::PathBuf;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunConfig {
    #[serde(with = "serde_c64")]
    pub eta: Complex64,
    pub length: usize,
    /// Inhomogeneities; defaults to a homogeneous chain.
    #[serde(default, with = "serde_c64::opt_vec")]
    pub xi: Option<Vec<Complex64>>,
    pub right: BoundarySpec,
    pub left: BoundarySpec,
    /// Single excitation cap...
    #[serde(default)]
    pub n: Option<usize>,
    /// ...or an inclusive sweep range; defaults to 0..=length.
    #[serde(default)]
    pub n_range: Option<[usize; 2]>,
    #[serde(default)]
    pub seed: u64,
    /// Per-check tolerance overrides by check name.
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    #[serde(default)]
    pub solver: SolverConfig,
    /// Default output path; the command-line flag wins.
    #[serde(default)]
    pub output: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig =
            serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if self.length == 0 {
            return Err(Error::Config("length must be at least 1".into()));
        }
        if self.eta.norm() == 0.0 {
            return Err(Error::Config("eta must be nonzero".into()));
        }
        if let Some(xi) = &self.xi {
            if xi.len() != self.length {
                return Err(Error::Config(format!(
                    "xi has {} entries for length {}",
                    xi.len(),
                    self.length
                )));
            }
        }
        if let Some([lo, hi]) = self.n_range {
            if lo > hi {
                return Err(Error::Config(format!("empty n_range [{lo}, {hi}]")));
            }
        }
        if let (Some(_), Some(_)) = (self.n, self.n_range) {
            return Err(Error::Config("give either n or n_range, not both".into()));
        }
        Ok(())
    }

    pub fn model_params(&self) -> Result<ModelParams> {
        let xi = self
            .xi
            .clone()
            .unwrap_or_else(|| vec![Complex64::new(0.0, 0.0); self.length]);
        ModelParams::new(self.eta, xi).map_err(|e| Error::Config(e.to_string()))
    }

    /// The excitation sweep: the single n, the configured range, or 0..=L.
    pub fn excitation_range(&self) -> (usize, usize) {
        if let Some(n) = self.n {
            (n, n)
        } else if let Some([lo, hi]) = self.n_range {
            (lo, hi)
        } else {
            (0, self.length)
        }
    }

    /// Seed precedence: command line beats the OPENCHAIN_SEED environment
    /// variable, which beats the config file.
    pub fn effective_seed(&self, cli: Option<u64>) -> Result<u64> {
        if let Some(s) = cli {
            return Ok(s);
        }
        match std::env::var("OPENCHAIN_SEED") {
            Ok(text) => text
                .trim()
                .parse::<u64>()
                .map_err(|e| Error::Config(format!("OPENCHAIN_SEED not a u64: {e}"))),
            Err(_) => Ok(self.seed),
        }
    }

    /// Tolerance for a named check, after overrides.
    pub fn tolerance(&self, name: &str) -> Option<f64> {
        self.tolerances.get(name).copied()
    }
}
