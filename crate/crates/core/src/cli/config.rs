//! Batch experiment configuration read from TOML.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_MEMORY_LIMIT_MIB: u64 = 1024;
pub const DEFAULT_TOLERANCE: f64 = 1e-12;

/// A grid axis: explicit values or an inclusive arithmetic range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GridSpec {
    Values(Vec<f64>),
    Range { start: f64, stop: f64, step: f64 },
}

impl GridSpec {
    pub fn points(&self) -> Result<Vec<f64>> {
        match self {
            GridSpec::Values(v) => {
                if v.iter().any(|x| !x.is_finite()) {
                    return Err(Error::Config("grid values must be finite".into()));
                }
                Ok(v.clone())
            }
            &GridSpec::Range { start, stop, step } => {
                if !(start.is_finite() && stop.is_finite() && step.is_finite() && step > 0.0 && stop >= start) {
                    return Err(Error::Config(format!("bad range {start}..{stop} step {step}")));
                }
                let n = ((stop - start) / step + 1e-9).floor() as usize;
                Ok((0..=n).map(|i| start + i as f64 * step).collect())
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grids {
    pub lambda: Option<GridSpec>,
    pub lambda_tilde: Option<GridSpec>,
    pub alpha: Option<GridSpec>,
    pub theta: Option<GridSpec>,
    pub phi: Option<GridSpec>,
    pub omega: Option<GridSpec>,
    pub beta: Option<GridSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub suite: String,
    #[serde(rename = "L")]
    pub sites: usize,
    pub modes: Vec<usize>,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub observable: Option<String>,
    pub memory_limit_mib: u64,
    pub grid: Grids,
    /// Per-check overrides keyed by check name, plus `default`.
    pub tolerance: BTreeMap<String, f64>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            suite: "default".into(),
            sites: 4,
            modes: vec![1, 2],
            seed: 0,
            out: None,
            observable: None,
            memory_limit_mib: DEFAULT_MEMORY_LIMIT_MIB,
            grid: Grids::default(),
            tolerance: BTreeMap::new(),
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let config: ExperimentConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.sites < 2 {
            return Err(Error::Config("L must be at least 2".into()));
        }
        if let Some(bad) = self.modes.iter().find(|&&y| y == 0 || y >= self.sites) {
            return Err(Error::Config(format!("mode {bad} outside 1..{}", self.sites - 1)));
        }
        if self.tolerance.values().any(|t| !(t.is_finite() && *t > 0.0)) {
            return Err(Error::Config("tolerances must be positive".into()));
        }
        let g = &self.grid;
        for spec in [&g.lambda, &g.lambda_tilde, &g.alpha, &g.theta, &g.phi, &g.omega, &g.beta]
            .into_iter()
            .flatten()
        {
            spec.points()?;
        }
        Ok(())
    }

    pub fn tolerance_for(&self, check: &str, fallback: f64) -> f64 {
        self.tolerance
            .get(check)
            .or_else(|| self.tolerance.get("default"))
            .copied()
            .unwrap_or(fallback)
    }

    /// Rough peak memory for chain work at this length: four full-size
    /// complex vectors with map overhead.
    pub fn memory_estimate_mib(&self) -> u64 {
        let dim = 4f64.powi(self.sites as i32);
        (dim * 64.0 / (1u64 << 20) as f64).ceil() as u64
    }

    pub fn check_memory(&self) -> Result<()> {
        let needed = self.memory_estimate_mib();
        if needed > self.memory_limit_mib {
            return Err(Error::MemoryBudget {
                sites: self.sites,
                needed_mib: needed,
                limit_mib: self.memory_limit_mib,
            });
        }
        Ok(())
    }
}

/// Rounds to 12 significant digits so reports stay byte-stable.
pub fn sig12(x: f64) -> f64 {
    if x.is_finite() {
        format!("{x:.11e}").parse().unwrap_or(x)
    } else {
        x
    }
}

pub fn fmt12(x: f64) -> String {
    format!("{x:.11e}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_sections_and_ranges() {
        let text = r#"
            suite = "transport"
            L = 6
            modes = [1, 2, 3]
            seed = 42

            [grid]
            lambda = [0.5, 1.0]
            phi = { start = 0.0, stop = 1.0, step = 0.25 }

            [tolerance]
            default = 1e-10
        "#;
        let c = ExperimentConfig::from_toml(text).unwrap();
        assert_eq!(c.sites, 6);
        assert_eq!(c.grid.phi.as_ref().unwrap().points().unwrap(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(c.tolerance_for("anything", 1e-12), 1e-10);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(ExperimentConfig::from_toml("L = 4\nmodes = [4]").is_err());
        assert!(ExperimentConfig::from_toml("bogus = 1").is_err());
        assert!(ExperimentConfig::from_toml("[grid]\nlambda = { start = 1.0, stop = 0.0, step = 0.1 }").is_err());
    }

    #[test]
    fn memory_guard_refuses_long_chains() {
        let c = ExperimentConfig {
            sites: 20,
            ..Default::default()
        };
        assert!(matches!(c.check_memory(), Err(Error::MemoryBudget { sites: 20, .. })));
        assert!(ExperimentConfig::default().check_memory().is_ok());
    }

    #[test]
    fn twelve_digit_rounding() {
        assert_eq!(fmt12(0.5), "5.00000000000e-1");
        assert_eq!(sig12(1.0 / 3.0), 0.333333333333);
    }
}
