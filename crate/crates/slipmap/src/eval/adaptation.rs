//! Unseen-soil adaptation experiment.
//!
//! A soil is withheld from the annotation set and painted onto its own
//! terrain. The segmentation proxy assigns it a pseudo-class, which starts at
//! the prior slip band. The rover then traverses the terrain in stages with
//! geometrically growing traversal counts; after each stage the estimator
//! refits and the pseudo-class model is scored against both the planted
//! expectation curve and a frozen noisy test set.

use serde::{Deserialize, Serialize};

use crate::costmap::build_slip_cost_map;
use crate::error::{Error, Result};
use crate::estimator::{ModelConfig, SlipEstimator};
use crate::eval::dataset::random_waypoints;
use crate::mix_seed;
use crate::rover::{follow_path, PdGains, RoverParams, ScenarioConfig, WheelSide};
use crate::segment::{ClassLabel, SegmentationConfig};
use crate::sliprisk::{mae, SlipRiskBand};
use crate::terrain::{generate_terrain_with_palette, SoilCatalog, SoilId, TerrainPattern};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SALT_ADAPT_SEG: u64 = 0xAD5E;
const SALT_ADAPT_TEST: u64 = 0xAD7E;
const SALT_ADAPT_TRAJ: u64 = 0xAD00_0000;

/// Stage schedule for the adaptation experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdaptationConfig {
    /// Traversals driven before each refit. Geometric growth keeps each
    /// refit's accuracy gain well above run-to-run fluctuation.
    pub traversals_per_refit: Vec<usize>,
    pub traversal_duration_s: f64,
    /// Speed range for commanded speeds and for evaluation.
    pub speed_min: f64,
    pub speed_max: f64,
    /// Size of the frozen noisy test set.
    pub n_measured_test: usize,
}

impl Default for AdaptationConfig {
    fn default() -> Self {
        Self {
            traversals_per_refit: vec![4, 16, 64, 256, 1024],
            traversal_duration_s: 10.0,
            speed_min: 0.1,
            speed_max: 0.33,
            n_measured_test: 2000,
        }
    }
}

/// Outcome of one adaptation run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdaptationReport {
    pub excluded_soil: SoilId,
    /// Label the proxy assigned to the withheld soil.
    pub pseudo_class: ClassLabel,
    /// Cost map statistics before any data: must show the prior.
    pub initial_mean: f64,
    pub initial_band: SlipRiskBand,
    /// MAE against the planted expectation curve on a dense speed grid;
    /// index 0 is the prior stage, then one entry per refit.
    pub curve_mae: Vec<f64>,
    /// MAE against the frozen noisy test set, same indexing.
    pub measured_mae: Vec<f64>,
    /// Buffered samples after each refit.
    pub samples_per_stage: Vec<usize>,
}

/// Run the unseen-soil adaptation experiment for one withheld soil.
///
/// Refits are driven by the stage schedule: the estimator's `refit_every`
/// is disabled and its buffer is sized to retain every traversal, so each
/// stage fits on all data gathered so far.
pub fn unseen_soil_adaptation(
    catalog: &SoilCatalog,
    excluded: SoilId,
    seg_cfg: &SegmentationConfig,
    model_cfg: &ModelConfig,
    adapt_cfg: &AdaptationConfig,
    seed: u64,
) -> Result<AdaptationReport> {
    let soil = catalog
        .get(excluded)
        .ok_or_else(|| Error::InvalidArgument(format!("soil {excluded} not in catalog")))?;
    if adapt_cfg.traversals_per_refit.is_empty() {
        return Err(Error::InvalidArgument("need at least one refit stage".into()));
    }

    let annotation = crate::segment::AnnotationSet::all_except(catalog, excluded)?;
    let grid = generate_terrain_with_palette(
        mix_seed(seed, SALT_ADAPT_SEG),
        &[excluded],
        TerrainPattern::stripes(),
        20.0,
        20.0,
        0.1,
    )?;
    let mut proxy = seg_cfg.build_proxy(catalog, annotation)?;
    let mut seg_rng = ChaCha8Rng::seed_from_u64(mix_seed(seed, SALT_ADAPT_SEG));
    let seg = proxy.segment(&grid, catalog, &mut seg_rng)?;
    let pseudo_class = seg.label_at_clamped(10.0, 10.0);

    // Size the buffer for every traversal so refits see all data so far.
    let total_traversals: usize = adapt_cfg.traversals_per_refit.iter().sum();
    let per_traversal_bound =
        (adapt_cfg.traversal_duration_s / 0.1).ceil() as usize * 2 + 4;
    let cfg = ModelConfig {
        refit_every: usize::MAX,
        capacity: model_cfg
            .capacity
            .max(total_traversals * per_traversal_bound),
        ..*model_cfg
    };
    let mut estimator = SlipEstimator::new(cfg)?;

    // Prior-stage cost map: the withheld soil must show the prior band.
    let initial_map = build_slip_cost_map(&seg, estimator.registry(), &cfg, 0.3)?;
    let initial_cell = initial_map.cells()[0];

    // Frozen evaluation targets.
    let grid_speeds: Vec<f64> = {
        let mut v = adapt_cfg.speed_min;
        let mut speeds = Vec::new();
        while v <= adapt_cfg.speed_max + 1e-12 {
            speeds.push(v);
            v += 1e-3;
        }
        speeds
    };
    let curve_truth: Vec<f64> = grid_speeds.iter().map(|v| soil.expected_slip(*v)).collect();
    let mut test_rng = ChaCha8Rng::seed_from_u64(mix_seed(seed, SALT_ADAPT_TEST));
    let measured_test: Vec<(f64, f64)> = (0..adapt_cfg.n_measured_test)
        .map(|_| {
            let v = test_rng.random_range(adapt_cfg.speed_min..=adapt_cfg.speed_max);
            (v, soil.sample_slip(v, &mut test_rng))
        })
        .collect();

    let score = |estimator: &SlipEstimator| -> Result<(f64, f64)> {
        let model = estimator.registry().model_for(&pseudo_class, &cfg);
        let curve_pred: Vec<f64> = grid_speeds.iter().map(|v| model.predict(*v).0).collect();
        let measured_pred: Vec<f64> =
            measured_test.iter().map(|(v, _)| model.predict(*v).0).collect();
        let measured_truth: Vec<f64> = measured_test.iter().map(|(_, s)| *s).collect();
        Ok((
            mae(&curve_pred, &curve_truth)?,
            mae(&measured_pred, &measured_truth)?,
        ))
    };

    let mut curve_mae = Vec::new();
    let mut measured_mae = Vec::new();
    let mut samples_per_stage = Vec::new();
    let (c0, m0) = score(&estimator)?;
    curve_mae.push(c0);
    measured_mae.push(m0);
    samples_per_stage.push(0);

    let params = RoverParams::default();
    let gains = PdGains::default();
    let mut traversal_idx = 0u64;
    for &count in &adapt_cfg.traversals_per_refit {
        for _ in 0..count {
            let traj_seed = mix_seed(seed, SALT_ADAPT_TRAJ + traversal_idx);
            traversal_idx += 1;
            let mut rng = ChaCha8Rng::seed_from_u64(traj_seed);
            let v_command = rng.random_range(adapt_cfg.speed_min..=adapt_cfg.speed_max);
            let waypoints = random_waypoints(&mut rng, grid.width_m(), grid.height_m());
            let scenario = ScenarioConfig {
                v_command,
                duration_s: adapt_cfg.traversal_duration_s,
                ..ScenarioConfig::default()
            };
            let trajectory =
                follow_path(&waypoints, &params, &gains, &scenario, &grid, catalog, traj_seed)?;
            let labeled: Vec<_> = trajectory
                .samples
                .into_iter()
                .filter(|s| s.wheel != WheelSide::BodyMean)
                .map(|mut s| {
                    s.class_observed = seg.label_at_clamped(s.x, s.y);
                    s
                })
                .collect();
            estimator.insert(&labeled);
        }
        estimator.update_models();
        let (c, m) = score(&estimator)?;
        curve_mae.push(c);
        measured_mae.push(m);
        samples_per_stage.push(estimator.buffer().len());
    }

    Ok(AdaptationReport {
        excluded_soil: excluded,
        pseudo_class,
        initial_mean: initial_cell.mean,
        initial_band: initial_cell.band,
        curve_mae,
        measured_mae,
        samples_per_stage,
    })
}
