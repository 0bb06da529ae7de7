//! TOML experiment configuration.
//!
//! ```toml
//! [surface]
//! kind = "product"            # product | square | twist_pair | genus2
//! e1 = [0, 0, 1, -1, 0]       # [a1, a2, a3, a4, a6]
//! e2 = [0, -1, 1, -10, -20]
//! claimed_group = "B_C1"
//!
//! [extension]
//! kind = "cyclotomic"         # cyclotomic | quadratic | product
//! modulus = 5
//!
//! [lfield]
//! kind = "trivial"            # trivial | quadratic | cyclic
//!
//! [run]
//! pmax = 100000
//! ```
//!
//! Every key of `[run]` is optional; see [`RunConfig`] for the defaults.
//! Unknown keys anywhere are errors.

use crate::arith::SurfaceSpec;
use crate::equidist::AnalysisOptions;
use crate::error::{invalid, Error, Result};
use crate::galois::{ExtensionSpec, LFieldSpec};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub surface: SurfaceSpec,
    #[serde(default)]
    pub extension: ExtensionSpec,
    #[serde(default)]
    pub lfield: LFieldSpec,
    #[serde(default)]
    pub run: RunConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub pmax: u64,
    /// Seed for synthetic data.
    pub seed: u64,
    /// Frobenius cache; `None` means `<output_dir>/frobenius.csv`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cache: Option<PathBuf>,
    pub output_dir: PathBuf,
    pub irrep_cutoff: u32,
    pub jmax: u32,
    pub kmax: u32,
    pub threshold_c: f64,
    pub chi2_limit: f64,
    pub bins: [usize; 2],
    pub mc_oversample: usize,
    pub reference_seed: u64,
    pub s_grid: Vec<f64>,
    /// Truncation points for `lfun`; empty means every power of ten from
    /// `10³` up to `pmax`, then `pmax`.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub x_grid: Vec<u64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let a = AnalysisOptions::default();
        Self {
            pmax: 100_000,
            seed: 0,
            cache: None,
            output_dir: PathBuf::from("out"),
            irrep_cutoff: a.irrep_cutoff,
            jmax: a.jmax,
            kmax: a.kmax,
            threshold_c: a.threshold_c,
            chi2_limit: a.chi2_limit,
            bins: [a.bins.0, a.bins.1],
            mc_oversample: a.mc_oversample,
            reference_seed: a.reference_seed,
            s_grid: vec![1.1, 1.5, 2.0],
            x_grid: Vec::new(),
        }
    }
}

impl RunConfig {
    pub fn analysis(&self) -> AnalysisOptions {
        AnalysisOptions {
            irrep_cutoff: self.irrep_cutoff,
            jmax: self.jmax,
            kmax: self.kmax,
            threshold_c: self.threshold_c,
            chi2_limit: self.chi2_limit,
            bins: (self.bins[0], self.bins[1]),
            mc_oversample: self.mc_oversample,
            reference_seed: self.reference_seed,
        }
    }

    pub fn x_values(&self) -> Vec<u64> {
        if !self.x_grid.is_empty() {
            return self.x_grid.clone();
        }
        let mut xs: Vec<u64> = std::iter::successors(Some(1000u64), |x| x.checked_mul(10))
            .take_while(|&x| x < self.pmax)
            .collect();
        xs.push(self.pmax);
        xs
    }

    pub fn cache_path(&self) -> PathBuf {
        self.cache.clone().unwrap_or_else(|| self.output_dir.join("frobenius.csv"))
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Parse(e.to_string()))
    }

    /// SHA-256 of the canonical TOML rendering.
    pub fn hash(&self) -> Result<String> {
        Ok(hex::encode(Sha256::digest(self.to_toml()?.as_bytes())))
    }

    pub fn validate(&self) -> Result<()> {
        let r = &self.run;
        if r.pmax < 5 {
            return invalid(format!("run.pmax = {} leaves no primes >= 5", r.pmax));
        }
        if r.bins[0] == 0 || r.bins[1] == 0 {
            return invalid("run.bins must be positive");
        }
        if !(r.threshold_c > 0.0) || !(r.chi2_limit > 0.0) {
            return invalid("run.threshold_c and run.chi2_limit must be positive");
        }
        if let Some(&x) = r.x_grid.iter().find(|&&x| x > r.pmax) {
            return invalid(format!("run.x_grid entry {x} exceeds run.pmax = {}", r.pmax));
        }
        Ok(())
    }
}
