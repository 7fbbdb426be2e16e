//! Benchmark harness: fit the full pipeline on the training split and
//! compare per-terrain MAE against a class-agnostic prior baseline and the
//! planted-curve oracle, plus calibration of the predictive bands.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimator::{ModelConfig, SlipEstimator};
use crate::eval::dataset::{Dataset, TrajectoryRecord};
use crate::mix_seed;
use crate::rover::SlipSample;
use crate::segment::{SegmentationConfig, SegmentationMap, SegmentationProxy};
use crate::sliprisk::mae;
use crate::terrain::SoilCatalog;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SALT_SEGMENTATION: u64 = 0x5E60_0000;

/// Prediction strategies compared in the benchmark.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MethodVariant {
    /// Segmentation-observed classes with fitted per-class models.
    FullPipeline,
    /// Class-agnostic prior mean everywhere.
    PriorOnly,
    /// Planted ground-truth curve of the true soil (lower bound).
    Oracle,
}

impl std::fmt::Display for MethodVariant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MethodVariant::FullPipeline => write!(f, "full-pipeline"),
            MethodVariant::PriorOnly => write!(f, "prior-only"),
            MethodVariant::Oracle => write!(f, "oracle"),
        }
    }
}

/// Everything fitted from the training split.
#[derive(Debug, Clone)]
pub struct FittedPipeline {
    pub proxy: SegmentationProxy,
    pub estimator: SlipEstimator,
    /// Segmentation maps for every run terrain, keyed by terrain id.
    pub seg_maps: BTreeMap<u32, SegmentationMap>,
}

impl FittedPipeline {
    /// Predicted `(mean, sigma)` for a sample under a method variant.
    pub fn predict(
        &self,
        variant: MethodVariant,
        catalog: &SoilCatalog,
        sample: &SlipSample,
    ) -> (f64, f64) {
        let cfg = self.estimator.config();
        match variant {
            MethodVariant::FullPipeline => self
                .estimator
                .registry()
                .model_for(&sample.class_observed, cfg)
                .predict(sample.v_ref),
            MethodVariant::PriorOnly => (cfg.prior_mean, cfg.prior_sigma),
            MethodVariant::Oracle => {
                let soil = catalog.get(sample.soil_true).expect("soil in catalog");
                (soil.expected_slip(sample.v_ref), soil.noise_std)
            }
        }
    }
}

/// Segment every run terrain and train the estimator on the relabeled
/// training split. Deterministic per seed.
pub fn fit_pipeline(
    dataset: &Dataset,
    catalog: &SoilCatalog,
    seg_cfg: &SegmentationConfig,
    model_cfg: ModelConfig,
    master_seed: u64,
) -> Result<FittedPipeline> {
    let mut proxy = seg_cfg.build_proxy(catalog, dataset.annotation.clone())?;
    let mut seg_maps = BTreeMap::new();
    for terrain in &dataset.terrains {
        let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(
            master_seed,
            SALT_SEGMENTATION + terrain.terrain_id as u64,
        ));
        let map = proxy.segment(&terrain.grid, catalog, &mut rng)?;
        seg_maps.insert(terrain.terrain_id, map);
    }

    let mut estimator = SlipEstimator::new(model_cfg)?;
    for record in &dataset.train {
        let seg = seg_maps
            .get(&record.terrain_id)
            .ok_or_else(|| Error::InvalidArgument("record references unknown terrain".into()))?;
        let labeled = relabel_record(record, seg);
        estimator.insert(&labeled.samples);
    }
    estimator.update_models();

    Ok(FittedPipeline {
        proxy,
        estimator,
        seg_maps,
    })
}

/// Stamp each sample's observed class from a segmentation map.
pub fn relabel_record(record: &TrajectoryRecord, seg: &SegmentationMap) -> TrajectoryRecord {
    let mut out = record.clone();
    for sample in &mut out.samples {
        sample.class_observed = seg.label_at_clamped(sample.x, sample.y);
    }
    out
}

/// MAE of one method on one terrain's pooled samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TerrainMae {
    pub terrain_id: u32,
    pub terrain: String,
    pub n: usize,
    pub mae: f64,
}

/// Per-terrain MAE of a variant plus terrains skipped for lack of samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariantEvaluation {
    pub variant: MethodVariant,
    pub per_terrain: Vec<TerrainMae>,
    pub skipped: Vec<String>,
}

/// Group labeled test records by terrain and report MAE per terrain.
pub fn evaluate_mae(
    variant: MethodVariant,
    fitted: &FittedPipeline,
    catalog: &SoilCatalog,
    dataset: &Dataset,
    labeled_test: &[TrajectoryRecord],
) -> Result<VariantEvaluation> {
    let mut per_terrain = Vec::new();
    let mut skipped = Vec::new();
    for terrain in dataset.test_terrains() {
        let mut estimates = Vec::new();
        let mut truths = Vec::new();
        for record in labeled_test
            .iter()
            .filter(|r| r.terrain_id == terrain.terrain_id)
        {
            for sample in &record.samples {
                estimates.push(fitted.predict(variant, catalog, sample).0);
                truths.push(sample.slip);
            }
        }
        if estimates.is_empty() {
            skipped.push(terrain.name.clone());
            continue;
        }
        per_terrain.push(TerrainMae {
            terrain_id: terrain.terrain_id,
            terrain: terrain.name.clone(),
            n: estimates.len(),
            mae: mae(&estimates, &truths)?,
        });
    }
    Ok(VariantEvaluation {
        variant,
        per_terrain,
        skipped,
    })
}

/// Empirical coverage of the +-1 sigma and +-2 sigma prediction bands.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CalibrationReport {
    pub within_one_sigma: f64,
    pub within_two_sigma: f64,
    pub n: usize,
}

/// Fraction of measurements within one and two predicted sigmas of the
/// predicted mean.
pub fn calibration_report(
    predictions: &[(f64, f64)],
    measurements: &[f64],
) -> Result<CalibrationReport> {
    if predictions.is_empty() || predictions.len() != measurements.len() {
        return Err(Error::InvalidArgument(format!(
            "calibration needs equal non-empty lengths, got {} and {}",
            predictions.len(),
            measurements.len()
        )));
    }
    let mut one = 0usize;
    let mut two = 0usize;
    for ((mean, sigma), measured) in predictions.iter().zip(measurements) {
        let d = (measured - mean).abs();
        if d <= *sigma {
            one += 1;
        }
        if d <= 2.0 * sigma {
            two += 1;
        }
    }
    let n = predictions.len();
    Ok(CalibrationReport {
        within_one_sigma: one as f64 / n as f64,
        within_two_sigma: two as f64 / n as f64,
        n,
    })
}

/// Full benchmark output. Runtime is tracked separately from the serialized
/// report so repeated seeded runs produce identical files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkReport {
    pub master_seed: u64,
    pub n_train_samples: usize,
    pub n_test_samples: usize,
    pub variants: Vec<VariantEvaluation>,
    pub calibration: CalibrationReport,
    /// Held-out terrains where the full pipeline beats the prior baseline.
    pub wins_vs_prior: usize,
    pub n_test_terrains: usize,
}

impl BenchmarkReport {
    pub fn variant(&self, variant: MethodVariant) -> Option<&VariantEvaluation> {
        self.variants.iter().find(|v| v.variant == variant)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Human-readable table of per-terrain MAE by method.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "slip estimation benchmark (seed {})\n",
            self.master_seed
        ));
        out.push_str(&format!(
            "train samples: {}   test samples: {}\n\n",
            self.n_train_samples, self.n_test_samples
        ));
        let terrains: Vec<&TerrainMae> = self
            .variants
            .first()
            .map(|v| v.per_terrain.iter().collect())
            .unwrap_or_default();
        out.push_str(&format!("{:<16}", "method"));
        for t in &terrains {
            out.push_str(&format!("{:>18}", t.terrain));
        }
        out.push('\n');
        for evaluation in &self.variants {
            out.push_str(&format!("{:<16}", evaluation.variant.to_string()));
            for t in &evaluation.per_terrain {
                out.push_str(&format!("{:>18.4}", t.mae));
            }
            out.push('\n');
            if !evaluation.skipped.is_empty() {
                out.push_str(&format!(
                    "  (skipped empty terrains: {})\n",
                    evaluation.skipped.join(", ")
                ));
            }
        }
        out.push_str(&format!(
            "\nfull pipeline beats prior on {}/{} held-out terrains\n",
            self.wins_vs_prior, self.n_test_terrains
        ));
        out.push_str(&format!(
            "calibration: {:.3} within 1 sigma, {:.3} within 2 sigma (n = {})\n",
            self.calibration.within_one_sigma, self.calibration.within_two_sigma, self.calibration.n
        ));
        out
    }
}

/// Outputs of a full benchmark run, including the fitted pipeline for
/// artifact export.
#[derive(Debug, Clone)]
pub struct BenchmarkRun {
    pub dataset: Dataset,
    pub fitted: FittedPipeline,
    pub labeled_test: Vec<TrajectoryRecord>,
    pub report: BenchmarkReport,
}

/// Generate the dataset, fit the pipeline, and evaluate every variant.
pub fn run_benchmark(
    spec: &crate::eval::dataset::DatasetSpec,
    catalog: &SoilCatalog,
    seg_cfg: &SegmentationConfig,
    model_cfg: ModelConfig,
    master_seed: u64,
) -> Result<BenchmarkRun> {
    let dataset = crate::eval::dataset::generate_dataset(spec, catalog, master_seed)?;
    run_benchmark_on(dataset, catalog, seg_cfg, model_cfg, master_seed)
}

/// Benchmark an already-generated dataset.
pub fn run_benchmark_on(
    dataset: Dataset,
    catalog: &SoilCatalog,
    seg_cfg: &SegmentationConfig,
    model_cfg: ModelConfig,
    master_seed: u64,
) -> Result<BenchmarkRun> {
    let fitted = fit_pipeline(&dataset, catalog, seg_cfg, model_cfg, master_seed)?;
    let labeled_test: Vec<TrajectoryRecord> = dataset
        .test
        .iter()
        .map(|record| {
            let seg = fitted
                .seg_maps
                .get(&record.terrain_id)
                .ok_or_else(|| Error::InvalidArgument("missing segmentation map".into()))?;
            Ok(relabel_record(record, seg))
        })
        .collect::<Result<_>>()?;

    let variants = vec![
        evaluate_mae(MethodVariant::FullPipeline, &fitted, catalog, &dataset, &labeled_test)?,
        evaluate_mae(MethodVariant::PriorOnly, &fitted, catalog, &dataset, &labeled_test)?,
        evaluate_mae(MethodVariant::Oracle, &fitted, catalog, &dataset, &labeled_test)?,
    ];

    let full = &variants[0];
    let prior = &variants[1];
    let wins_vs_prior = full
        .per_terrain
        .iter()
        .zip(&prior.per_terrain)
        .filter(|(f, p)| {
            debug_assert_eq!(f.terrain_id, p.terrain_id);
            f.mae < p.mae
        })
        .count();

    let mut predictions = Vec::new();
    let mut measurements = Vec::new();
    for record in &labeled_test {
        for sample in &record.samples {
            predictions.push(fitted.predict(MethodVariant::FullPipeline, catalog, sample));
            measurements.push(sample.slip);
        }
    }
    let calibration = calibration_report(&predictions, &measurements)?;

    let report = BenchmarkReport {
        master_seed,
        n_train_samples: dataset.train_count(),
        n_test_samples: dataset.test_count(),
        n_test_terrains: dataset.test_terrains().count(),
        variants,
        calibration,
        wins_vs_prior,
    };

    Ok(BenchmarkRun {
        dataset,
        fitted,
        labeled_test,
        report,
    })
}
