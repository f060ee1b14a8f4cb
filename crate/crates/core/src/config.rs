//! Run settings, loadable from TOML. Every field is optional in the file.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::bergman::MultiplierGrid;
use crate::error::{Error, Result};
use crate::ims::QuadConfig;
use crate::poly::DEFAULT_GCD_TOL;
use crate::roots::RootConfig;
use crate::schwarzian::NormGrid;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub circle_tol: f64,
    pub quad_tol: f64,
    pub gcd_tol: f64,
    pub k_min: u32,
    pub k_max: u32,
    /// Worker threads; `None` uses every core.
    pub threads: Option<usize>,
    pub format: OutputFormat,
    /// Uniform angles per radial level in sup-norm searches.
    pub norm_angles: usize,
    /// Coefficient truncation for multiplier ratios.
    pub multiplier_truncation: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            circle_tol: RootConfig::default().circle_tol,
            quad_tol: QuadConfig::default().quad_tol,
            gcd_tol: DEFAULT_GCD_TOL,
            k_min: 4,
            k_max: 16,
            threads: None,
            format: OutputFormat::Json,
            norm_angles: NormGrid::default().angles,
            multiplier_truncation: MultiplierGrid::default().truncation,
        }
    }
}

impl RunConfig {
    pub fn from_toml_str(s: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(s).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("circle_tol", self.circle_tol),
            ("quad_tol", self.quad_tol),
            ("gcd_tol", self.gcd_tol),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Config(format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.k_min < self.k_max && self.k_max <= 24 && self.k_min >= 3) {
            return Err(Error::Config(format!(
                "ladder bounds must satisfy 3 ≤ k_min < k_max ≤ 24, got {}..{}",
                self.k_min, self.k_max
            )));
        }
        if self.threads == Some(0) {
            return Err(Error::Config("threads must be at least 1".into()));
        }
        if self.norm_angles < 8 || self.multiplier_truncation < 100 {
            return Err(Error::Config("norm_angles ≥ 8 and multiplier_truncation ≥ 100 required".into()));
        }
        Ok(())
    }

    pub fn root_config(&self) -> RootConfig {
        RootConfig {
            circle_tol: self.circle_tol,
            ..RootConfig::default()
        }
    }

    pub fn quad_config(&self) -> QuadConfig {
        QuadConfig {
            quad_tol: self.quad_tol,
            ..QuadConfig::default()
        }
    }

    pub fn norm_grid(&self) -> NormGrid {
        NormGrid {
            angles: self.norm_angles,
            ..NormGrid::default()
        }
    }

    pub fn multiplier_grid(&self) -> MultiplierGrid {
        MultiplierGrid {
            truncation: self.multiplier_truncation,
            ..MultiplierGrid::default()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_gives_defaults() {
        assert_eq!(RunConfig::from_toml_str("").unwrap(), RunConfig::default());
    }

    #[test]
    fn partial_file() {
        let c = RunConfig::from_toml_str("k_max = 20\nformat = \"csv\"\nthreads = 2").unwrap();
        assert_eq!((c.k_max, c.format, c.threads), (20, OutputFormat::Csv, Some(2)));
        assert_eq!(c.k_min, 4);
    }

    #[test]
    fn invalid_values_are_rejected() {
        for bad in ["quad_tol = 0.0", "k_min = 16\nk_max = 16", "k_max = 25", "threads = 0", "nope = 1", "circle_tol = -1e-9"] {
            assert!(matches!(RunConfig::from_toml_str(bad), Err(Error::Config(_))), "{bad}");
        }
    }
}
