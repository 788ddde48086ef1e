//! Experiment configuration: a TOML file with one section per subcommand,
//! overridable from the command line.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::classical::IntegratorOptions;
use crate::error::{Error, Result};
use crate::poincare::Direction;
use crate::spectra::ModelParams;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ModelSection {
    pub u: f64,
    pub j: f64,
    pub epsilon: f64,
    pub n: usize,
}

impl Default for ModelSection {
    fn default() -> Self {
        ModelSection { u: 0.7, j: 1.0, epsilon: 1.5, n: 120 }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    /// Output directory; `out` when unset.
    pub dir: Option<PathBuf>,
    /// Eigensystem cache; `<dir>/cache` when unset.
    pub cache_dir: Option<PathBuf>,
    /// Also write PGM rasters next to dense grids.
    pub plot: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ProjectSection {
    /// Explicit eigenstate indices.
    pub indices: Vec<usize>,
    /// Select the `count` eigenstates nearest this `E/N` instead.
    pub target: Option<f64>,
    pub count: usize,
    /// Coherent-state (smoothed) projection instead of the Fock projection.
    pub husimi: bool,
    /// Phase points per angle for a quadrature cross-check; closed form only when unset.
    pub quadrature_points: Option<usize>,
    /// Display exponent for the dense export.
    pub power: Option<f64>,
    /// Write the dense matrix export as well as the CSV.
    pub dense: bool,
    /// Microcanonical average over `|E/N - center| < window/2`.
    pub window: Option<f64>,
    /// Microcanonical average over this many eigenstates nearest the centre.
    pub window_count: Option<usize>,
    /// Centre of the microcanonical window; `target` or 0.0752 when unset.
    pub center: Option<f64>,
    /// Largest components per selected eigenstate.
    pub top_components: Option<usize>,
    pub bins: usize,
}

impl Default for ProjectSection {
    fn default() -> Self {
        ProjectSection {
            indices: Vec::new(),
            target: None,
            count: 1,
            husimi: false,
            quadrature_points: None,
            power: None,
            dense: false,
            window: None,
            window_count: None,
            center: None,
            top_components: None,
            bins: 200,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Recipe {
    /// One trajectory with its visitation histogram.
    Trajectory,
    /// Poincare section of one long trajectory.
    Section,
    /// Short-time ensemble section.
    Ensemble,
    /// Equilibria and their stability.
    Critical,
    /// Six trajectories from the rho2 = 0 point with different phase differences.
    Fig2,
    /// Runs from the rho2 = 0 point differing by a common phase rotation.
    Fig3,
    /// Ensemble section plus long-time sections.
    Fig9,
    /// Same procedure as fig9, usually at a different tilt.
    Fig11,
    /// Sections at phi32 = 0 and pi with their overlap and a long-time projection.
    Fig13,
    /// Classical histogram next to the microcanonical average.
    Fig14,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ClassicalSection {
    pub recipe: Recipe,
    /// Scaled energy `E/N`.
    pub energy: f64,
    pub t_final: f64,
    pub sample_dt: f64,
    pub t_short: f64,
    /// Ensemble size.
    pub seeds: usize,
    /// Trajectories integrated to `t_final` in the fig9/fig11 recipes.
    pub long_seeds: usize,
    pub bins: usize,
    pub phi_section: f64,
    pub direction: Direction,
    /// `(n1, n3, phi12, phi32)`; the rho2 = 0 point with zero phases when unset.
    pub initial: Option<[f64; 4]>,
    pub critical_resolution: usize,
    /// Write full trajectories as CSV.
    pub write_trajectories: bool,
    pub integrator: IntegratorOptions,
}

impl Default for ClassicalSection {
    fn default() -> Self {
        ClassicalSection {
            recipe: Recipe::Trajectory,
            energy: 0.0752,
            t_final: 1e4,
            sample_dt: 0.01,
            t_short: 100.0,
            seeds: 460,
            long_seeds: 6,
            bins: 200,
            phi_section: 0.0,
            direction: Direction::Both,
            initial: None,
            critical_resolution: 8,
            write_trajectories: false,
            integrator: IntegratorOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CompareSection {
    pub a: Option<PathBuf>,
    pub b: Option<PathBuf>,
    /// Bins per axis used when a lattice grid is compared.
    pub bins: usize,
}

impl Default for CompareSection {
    fn default() -> Self {
        CompareSection { a: None, b: None, bins: 200 }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    /// Seeds the offset of ensemble seed grids; cell centres when unset.
    pub seed: Option<u64>,
    pub model: ModelSection,
    pub output: OutputSection,
    pub project: ProjectSection,
    pub classical: ClassicalSection,
    pub compare: CompareSection,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn params(&self) -> Result<ModelParams> {
        let m = &self.model;
        ModelParams::new(m.u, m.j, m.epsilon, m.n).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn out_dir(&self) -> PathBuf {
        self.output.dir.clone().unwrap_or_else(|| PathBuf::from("out"))
    }

    pub fn cache_dir(&self) -> PathBuf {
        self.output.cache_dir.clone().unwrap_or_else(|| self.out_dir().join("cache"))
    }

    /// SHA-256 of the serialized configuration, output locations excluded.
    pub fn hash(&self) -> Result<String> {
        let mut canonical = self.clone();
        canonical.output = OutputSection { plot: self.output.plot, ..Default::default() };
        let text = canonical.to_toml()?;
        Ok(Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect())
    }

    pub fn validate(&self) -> Result<()> {
        self.params()?;
        let c = &self.classical;
        let positive = [("t_final", c.t_final), ("sample_dt", c.sample_dt), ("t_short", c.t_short)];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Config(format!("classical.{name} must be positive, got {v}")));
            }
        }
        if c.bins < 2 || self.project.bins < 2 || self.compare.bins < 2 {
            return Err(Error::Config("histograms need at least 2 bins".into()));
        }
        c.integrator.validate().map_err(|e| Error::Config(e.to_string()))?;
        if let Some(p) = self.project.power {
            if !(p > 0.0) {
                return Err(Error::Config(format!("project.power must be positive, got {p}")));
            }
        }
        if self.project.count == 0 {
            return Err(Error::Config("project.count must be at least 1".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_defaults() {
        let cfg = ExperimentConfig::from_toml("[model]\nn = 30\nepsilon = 0.7\n[classical]\nrecipe = \"fig13\"\n").unwrap();
        assert_eq!(cfg.model.n, 30);
        assert_eq!(cfg.model.u, 0.7);
        assert_eq!(cfg.classical.recipe, Recipe::Fig13);
        let back = ExperimentConfig::from_toml(&cfg.to_toml().unwrap()).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn rejects_unknown_keys_and_bad_values() {
        assert!(matches!(ExperimentConfig::from_toml("[model]\nbogus = 1\n"), Err(Error::Config(_))));
        let mut cfg = ExperimentConfig::default();
        cfg.model.n = 0;
        assert!(cfg.validate().is_err());
        let mut cfg = ExperimentConfig::default();
        cfg.classical.sample_dt = -1.0;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn hash_ignores_output_location() {
        let a = ExperimentConfig::default();
        let mut b = a.clone();
        b.output.dir = Some("elsewhere".into());
        assert_eq!(a.hash().unwrap(), b.hash().unwrap());
        b.model.epsilon = 0.0;
        assert_ne!(a.hash().unwrap(), b.hash().unwrap());
    }
}
