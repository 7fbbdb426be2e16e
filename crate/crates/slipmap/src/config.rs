//! TOML run configuration. Unknown keys are rejected; missing keys take the
//! documented defaults, so an empty file is a valid config.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimator::ModelConfig;
use crate::eval::DatasetSpec;
use crate::rover::{PdGains, RoverParams, ScenarioConfig};
use crate::segment::SegmentationConfig;
use crate::terrain::{default_catalog, SoilCatalog, TerrainPattern};

/// Terrain generation settings for the standalone terrain/costmap commands.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TerrainConfig {
    pub width_m: f64,
    pub height_m: f64,
    pub resolution: f64,
    pub pattern: TerrainPattern,
}

impl Default for TerrainConfig {
    fn default() -> Self {
        Self {
            width_m: 20.0,
            height_m: 20.0,
            resolution: 0.1,
            pattern: TerrainPattern::stripes(),
        }
    }
}

/// Cost map query settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CostmapConfig {
    /// Commanded speed the map is built for (m/s).
    pub speed: f64,
    /// Which run terrain to map (a name from the dataset terrains).
    pub terrain: String,
}

impl Default for CostmapConfig {
    fn default() -> Self {
        Self {
            speed: 0.3,
            terrain: "test-stripes".to_string(),
        }
    }
}

/// Top-level run configuration.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub seed: u64,
    /// Optional path to a soil catalog JSON replacing the built-in catalog.
    pub catalog_path: Option<PathBuf>,
    pub terrain: TerrainConfig,
    pub rover: RoverParams,
    pub controller: PdGains,
    pub scenario: ScenarioConfig,
    pub dataset: DatasetSpec,
    pub segmentation: SegmentationConfig,
    pub model: ModelConfig,
    pub costmap: CostmapConfig,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        if !path.exists() {
            return Err(Error::MissingInput(path.to_path_buf()));
        }
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string_pretty(self).map_err(|e| Error::Config(e.to_string()))
    }

    /// The soil catalog for this run: the override file when set, otherwise
    /// the built-in default.
    pub fn catalog(&self) -> Result<SoilCatalog> {
        match &self.catalog_path {
            Some(path) => {
                if !path.exists() {
                    return Err(Error::MissingInput(path.clone()));
                }
                SoilCatalog::from_json(&std::fs::read_to_string(path)?)
            }
            None => Ok(default_catalog()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_is_all_defaults() {
        let config = RunConfig::from_toml("").unwrap();
        assert_eq!(config, RunConfig::default());
        assert_eq!(config.dataset.total_samples, 10_080);
        assert_eq!(config.model.basis_count, 8);
        assert_eq!(config.rover.wheel_radius, 0.1);
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(matches!(
            RunConfig::from_toml("unknown_key = 1"),
            Err(Error::Config(_))
        ));
        assert!(matches!(
            RunConfig::from_toml("[rover]\nwheel_radius = 0.1\nbogus = 2"),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn partial_overrides_keep_other_defaults() {
        let config = RunConfig::from_toml(
            "seed = 9\n[dataset]\nn_trajectories = 4\n[terrain]\npattern = { kind = \"voronoi_patches\", num_seeds = 7 }\n",
        )
        .unwrap();
        assert_eq!(config.seed, 9);
        assert_eq!(config.dataset.n_trajectories, 4);
        assert_eq!(config.dataset.total_samples, 10_080);
        assert_eq!(
            config.terrain.pattern,
            TerrainPattern::VoronoiPatches { num_seeds: 7 }
        );
    }

    #[test]
    fn toml_round_trip() {
        let config = RunConfig::default();
        let text = config.to_toml().unwrap();
        let back = RunConfig::from_toml(&text).unwrap();
        assert_eq!(config, back);
    }

    #[test]
    fn missing_catalog_override_is_reported() {
        let config = RunConfig {
            catalog_path: Some(PathBuf::from("/nonexistent/catalog.json")),
            ..RunConfig::default()
        };
        assert!(matches!(config.catalog(), Err(Error::MissingInput(_))));
    }
}
