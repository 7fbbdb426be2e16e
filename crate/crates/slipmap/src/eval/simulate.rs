//! Single-scenario simulation producing a measured-vs-predicted slip series
//! (mean and std bands along a driven path).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimator::{ModelConfig, ModelRegistry};
use crate::rover::{follow_path, PdGains, RoverParams, ScenarioConfig, Trajectory, WheelSide};
use crate::segment::SegmentationMap;
use crate::terrain::{SoilCatalog, TerrainGrid};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesRow {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub v_ref: f64,
    pub measured_slip: f64,
    pub predicted_mean: f64,
    pub predicted_std: f64,
    pub class: String,
}

/// Time series of body-mean measurements with model predictions attached.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlipSeries {
    pub rows: Vec<SeriesRow>,
    pub seed: u64,
    pub v_command: f64,
}

impl SlipSeries {
    pub fn to_csv(&self) -> Result<String> {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record([
            "t",
            "x",
            "y",
            "v_ref",
            "measured_slip",
            "predicted_mean",
            "predicted_std",
            "class",
        ])?;
        for r in &self.rows {
            writer.write_record([
                format!("{}", r.t),
                format!("{}", r.x),
                format!("{}", r.y),
                format!("{}", r.v_ref),
                format!("{}", r.measured_slip),
                format!("{}", r.predicted_mean),
                format!("{}", r.predicted_std),
                r.class.clone(),
            ])?;
        }
        let bytes = writer.into_inner().map_err(|e| Error::Config(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Config(e.to_string()))
    }
}

/// Drive one path-following scenario and pair each body-mean measurement
/// with the fitted model's prediction for the observed class at that spot.
#[allow(clippy::too_many_arguments)]
pub fn simulate_series(
    waypoints: &[(f64, f64)],
    params: &RoverParams,
    gains: &PdGains,
    scenario: &ScenarioConfig,
    grid: &TerrainGrid,
    catalog: &SoilCatalog,
    seg: &SegmentationMap,
    registry: &ModelRegistry,
    cfg: &ModelConfig,
    seed: u64,
) -> Result<(SlipSeries, Trajectory)> {
    let trajectory = follow_path(waypoints, params, gains, scenario, grid, catalog, seed)?;
    let rows = trajectory
        .samples
        .iter()
        .filter(|s| s.wheel == WheelSide::BodyMean)
        .map(|s| {
            let class = seg.label_at_clamped(s.x, s.y);
            let (mean, std) = registry.model_for(&class, cfg).predict(s.v_ref);
            SeriesRow {
                t: s.t,
                x: s.x,
                y: s.y,
                v_ref: s.v_ref,
                measured_slip: s.slip,
                predicted_mean: mean,
                predicted_std: std,
                class: class.to_string(),
            }
        })
        .collect();
    Ok((
        SlipSeries {
            rows,
            seed,
            v_command: scenario.v_command,
        },
        trajectory,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::segment::{AnnotationSet, SegmentationConfig};
    use crate::terrain::{default_catalog, generate_terrain, TerrainPattern};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn series_rows_follow_logged_body_samples() {
        let catalog = default_catalog();
        let grid =
            generate_terrain(4, &catalog, TerrainPattern::voronoi(), 20.0, 20.0, 0.1).unwrap();
        let mut proxy = SegmentationConfig::default()
            .build_proxy(&catalog, AnnotationSet::all(&catalog))
            .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let seg = proxy.segment(&grid, &catalog, &mut rng).unwrap();
        let (series, trajectory) = simulate_series(
            &[(2.0, 2.0), (17.0, 10.0), (4.0, 17.0)],
            &RoverParams::default(),
            &PdGains::default(),
            &ScenarioConfig::default(),
            &grid,
            &catalog,
            &seg,
            &ModelRegistry::new(),
            &ModelConfig::default(),
            9,
        )
        .unwrap();
        let body_count = trajectory
            .samples
            .iter()
            .filter(|s| s.wheel == WheelSide::BodyMean)
            .count();
        assert_eq!(series.rows.len(), body_count);
        assert!(!series.rows.is_empty());
        // With no fitted models, every prediction shows the prior.
        for row in &series.rows {
            assert_eq!(row.predicted_mean, 0.3);
            assert_eq!(row.predicted_std, 0.15);
        }
        let csv_text = series.to_csv().unwrap();
        assert_eq!(csv_text.lines().count(), series.rows.len() + 1);
    }
}
