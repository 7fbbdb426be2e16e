//! Per-class probabilistic slip models and the estimator that maintains them.
//!
//! Each observed terrain class carries a Gaussian-basis mean model over speed
//! plus a homoscedastic residual std `sigma`. Fitting minimizes the Gaussian
//! negative log-likelihood
//! `sum_i ((m_i - t_i)^2 / (2 sigma_i^2) + ln sigma_i)`: the mean comes from
//! least squares and the sigma that minimizes the loss given the mean is the
//! RMS residual, floored at `sigma_floor`. Classes with fewer than `n_min`
//! samples fall back to a prior model. The estimator couples a model registry
//! with a prioritized replay buffer and refits classes as new data arrives.
//! Registry and buffer form one unit with a single-writer contract; reads may
//! run concurrently between updates.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::replay::ReplayBuffer;
use crate::rover::SlipSample;
use crate::segment::ClassLabel;
use crate::sliprisk::{fit_basis_regression, CentersPolicy, GaussianBasisModel};

/// Configuration shared by class-model fitting and the estimator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelConfig {
    /// Basis count M for per-class mean models.
    pub basis_count: usize,
    /// Gaussian basis scale; `None` uses (speed range / M) * 0.8.
    pub scale: Option<f64>,
    /// Minimum samples before a class leaves the prior.
    pub n_min: usize,
    /// Lower bound on any fitted sigma.
    pub sigma_floor: f64,
    /// Mean slip assumed for untraversed classes.
    pub prior_mean: f64,
    /// Std assumed for untraversed classes.
    pub prior_sigma: f64,
    /// Replay buffer capacity.
    pub capacity: usize,
    /// Refit classes after this many inserted samples.
    pub refit_every: usize,
}

impl Default for ModelConfig {
    fn default() -> Self {
        Self {
            basis_count: 8,
            scale: None,
            n_min: 30,
            sigma_floor: 1e-3,
            prior_mean: 0.3,
            prior_sigma: 0.15,
            capacity: 4096,
            refit_every: 200,
        }
    }
}

impl ModelConfig {
    pub fn validate(&self) -> Result<()> {
        if self.basis_count == 0 {
            return Err(Error::InvalidArgument("basis_count must be positive".into()));
        }
        if !(self.sigma_floor > 0.0) {
            return Err(Error::InvalidArgument("sigma_floor must be positive".into()));
        }
        if self.refit_every == 0 {
            return Err(Error::InvalidArgument("refit_every must be at least 1".into()));
        }
        if self.capacity == 0 {
            return Err(Error::InvalidArgument("capacity must be at least 1".into()));
        }
        Ok(())
    }
}

/// Gaussian negative log-likelihood over valid pixels: both the plain sum
/// and the per-valid-pixel mean.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NllLoss {
    pub sum: f64,
    pub mean: f64,
    pub n_valid: usize,
}

/// Pointwise loss term `(mean - target)^2 / (2 sigma^2) + ln sigma`.
pub fn nll_point(mean: f64, sigma: f64, target: f64) -> f64 {
    let d = mean - target;
    d * d / (2.0 * sigma * sigma) + sigma.ln()
}

/// Negative Gaussian log-likelihood over the valid entries.
pub fn nll_loss(
    means: &[f64],
    sigmas: &[f64],
    targets: &[f64],
    valid: &[bool],
) -> Result<NllLoss> {
    let n = means.len();
    if sigmas.len() != n || targets.len() != n || valid.len() != n {
        return Err(Error::InvalidArgument(format!(
            "length mismatch: {} means, {} sigmas, {} targets, {} mask",
            n,
            sigmas.len(),
            targets.len(),
            valid.len()
        )));
    }
    let mut sum = 0.0;
    let mut n_valid = 0usize;
    for i in 0..n {
        if !valid[i] {
            continue;
        }
        if !(sigmas[i] > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "sigma must be positive, got {} at {i}",
                sigmas[i]
            )));
        }
        sum += nll_point(means[i], sigmas[i], targets[i]);
        n_valid += 1;
    }
    if n_valid == 0 {
        return Err(Error::InvalidArgument("empty valid set".into()));
    }
    Ok(NllLoss {
        sum,
        mean: sum / n_valid as f64,
        n_valid,
    })
}

/// Probabilistic slip model for one observed class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassSlipModel {
    pub class: ClassLabel,
    pub mean_model: GaussianBasisModel,
    /// Homoscedastic residual std, floored at `sigma_floor`.
    pub sigma: f64,
    pub n_samples: usize,
    pub is_prior: bool,
}

impl ClassSlipModel {
    /// Prior model for a class with no usable data yet.
    pub fn prior(class: ClassLabel, cfg: &ModelConfig) -> Self {
        Self {
            class,
            mean_model: GaussianBasisModel::constant(cfg.prior_mean, (0.0, 1.0)),
            sigma: cfg.prior_sigma,
            n_samples: 0,
            is_prior: true,
        }
    }

    /// Predicted `(mean, sigma)` at commanded speed `v`. The mean is clamped
    /// to [0, 1]; queries outside the fitted speed range use the nearest
    /// fitted endpoint, since Gaussian bases decay toward the bias away from
    /// the data.
    pub fn predict(&self, v: f64) -> (f64, f64) {
        let (lo, hi) = self.mean_model.speed_range();
        let v = v.clamp(lo, hi);
        (self.mean_model.predict_clamped(v), self.sigma)
    }
}

/// Fit a class model from `(speed, slip)` pairs. Fewer than `n_min` samples
/// produce the prior; a degenerate design (all speeds equal) falls back to a
/// constant mean at the sample average.
pub fn fit_class_model(
    class: ClassLabel,
    samples: &[(f64, f64)],
    cfg: &ModelConfig,
) -> ClassSlipModel {
    let n = samples.len();
    if n < cfg.n_min {
        return ClassSlipModel::prior(class, cfg);
    }
    let mean_model = match fit_basis_regression(
        samples,
        cfg.basis_count.min(n),
        cfg.scale,
        &CentersPolicy::Uniform,
    ) {
        Ok(model) => model,
        Err(_) => {
            let mean = samples.iter().map(|s| s.1).sum::<f64>() / n as f64;
            let lo = samples.iter().map(|s| s.0).fold(f64::INFINITY, f64::min);
            let hi = samples.iter().map(|s| s.0).fold(f64::NEG_INFINITY, f64::max);
            GaussianBasisModel::constant(mean, (lo, hi))
        }
    };
    // Exact minimizer of the NLL given the mean: sigma^2 = mean squared
    // residual.
    let sse: f64 = samples
        .iter()
        .map(|&(v, s)| (s - mean_model.predict(v)).powi(2))
        .sum();
    let sigma = (sse / n as f64).sqrt().max(cfg.sigma_floor);
    ClassSlipModel {
        class,
        mean_model,
        sigma,
        n_samples: n,
        is_prior: false,
    }
}

/// Snapshot of fitted class models keyed by label.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ModelRegistry {
    models: BTreeMap<ClassLabel, ClassSlipModel>,
}

impl ModelRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, class: &ClassLabel) -> Option<&ClassSlipModel> {
        self.models.get(class)
    }

    /// The class model, or a freshly constructed prior for unseen classes.
    pub fn model_for(&self, class: &ClassLabel, cfg: &ModelConfig) -> ClassSlipModel {
        self.models
            .get(class)
            .cloned()
            .unwrap_or_else(|| ClassSlipModel::prior(*class, cfg))
    }

    pub fn insert(&mut self, model: ClassSlipModel) {
        self.models.insert(model.class, model);
    }

    pub fn classes(&self) -> impl Iterator<Item = &ClassLabel> {
        self.models.keys()
    }

    pub fn models(&self) -> impl Iterator<Item = &ClassSlipModel> {
        self.models.values()
    }

    pub fn len(&self) -> usize {
        self.models.len()
    }

    pub fn is_empty(&self) -> bool {
        self.models.is_empty()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Couples the model registry with the prioritized replay buffer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlipEstimator {
    cfg: ModelConfig,
    registry: ModelRegistry,
    buffer: ReplayBuffer,
    inserted_since_refit: usize,
    dirty: BTreeSet<ClassLabel>,
}

impl SlipEstimator {
    pub fn new(cfg: ModelConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(Self {
            registry: ModelRegistry::new(),
            buffer: ReplayBuffer::new(cfg.capacity),
            inserted_since_refit: 0,
            dirty: BTreeSet::new(),
            cfg,
        })
    }

    pub fn config(&self) -> &ModelConfig {
        &self.cfg
    }

    pub fn registry(&self) -> &ModelRegistry {
        &self.registry
    }

    pub fn buffer(&self) -> &ReplayBuffer {
        &self.buffer
    }

    /// Priority of a sample under the current model of its observed class:
    /// its NLL, offset by `-ln(sigma_floor)` so the minimum is zero.
    pub fn priority_of(&self, sample: &SlipSample) -> f64 {
        let model = self.registry.model_for(&sample.class_observed, &self.cfg);
        let (mean, sigma) = model.predict(sample.v_ref);
        (nll_point(mean, sigma, sample.slip) - self.cfg.sigma_floor.ln()).max(0.0)
    }

    /// Insert samples one by one, refitting every `refit_every` insertions.
    pub fn insert(&mut self, samples: &[SlipSample]) {
        for sample in samples {
            let priority = self.priority_of(sample);
            self.dirty.insert(sample.class_observed);
            self.buffer.insert(sample.clone(), priority);
            self.inserted_since_refit += 1;
            if self.inserted_since_refit >= self.cfg.refit_every {
                self.update_models();
            }
        }
    }

    /// Refit every class that received data since the last refit from its
    /// buffered samples, then recompute all priorities under the new models.
    pub fn update_models(&mut self) {
        self.inserted_since_refit = 0;
        if self.dirty.is_empty() {
            return;
        }
        let dirty = std::mem::take(&mut self.dirty);
        for class in dirty {
            let pairs: Vec<(f64, f64)> = self
                .buffer
                .samples_for_class(&class)
                .iter()
                .map(|s| (s.v_ref, s.slip))
                .collect();
            self.registry.insert(fit_class_model(class, &pairs, &self.cfg));
        }
        let registry = self.registry.clone();
        let cfg = self.cfg;
        self.buffer.reprioritize(|sample| {
            let model = registry.model_for(&sample.class_observed, &cfg);
            let (mean, sigma) = model.predict(sample.v_ref);
            (nll_point(mean, sigma, sample.slip) - cfg.sigma_floor.ln()).max(0.0)
        });
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rover::WheelSide;
    use crate::terrain::SoilId;
    use approx::assert_abs_diff_eq;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn label() -> ClassLabel {
        ClassLabel::Soil(SoilId(0))
    }

    fn sample_at(v: f64, slip: f64) -> SlipSample {
        SlipSample {
            t: 0.0,
            x: 0.0,
            y: 0.0,
            soil_true: SoilId(0),
            class_observed: label(),
            v_ref: v,
            v_x: v * (1.0 - slip),
            slip,
            wheel: WheelSide::Left,
        }
    }

    #[test]
    fn nll_examples() {
        // Perfect prediction with unit sigma: both terms vanish.
        let loss = nll_loss(&[0.2, 0.7], &[1.0, 1.0], &[0.2, 0.7], &[true, true]).unwrap();
        assert_abs_diff_eq!(loss.sum, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(loss.mean, 0.0, epsilon = 1e-12);
        // Unit error with unit sigma contributes 1/2.
        let loss = nll_loss(&[0.0], &[1.0], &[1.0], &[true]).unwrap();
        assert_abs_diff_eq!(loss.sum, 0.5, epsilon = 1e-12);
        // sigma = e leaves only the log term.
        let loss = nll_loss(&[0.4], &[std::f64::consts::E], &[0.4], &[true]).unwrap();
        assert_abs_diff_eq!(loss.sum, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(loss.mean, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn nll_mask_and_errors() {
        // Mean is over valid entries only.
        let loss = nll_loss(
            &[0.0, 0.0, 9.0],
            &[1.0, 1.0, 1.0],
            &[1.0, 1.0, 0.0],
            &[true, true, false],
        )
        .unwrap();
        assert_eq!(loss.n_valid, 2);
        assert_abs_diff_eq!(loss.sum, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(loss.mean, 0.5, epsilon = 1e-12);
        assert!(matches!(
            nll_loss(&[0.0], &[1.0], &[0.0], &[false]),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            nll_loss(&[0.0], &[1.0, 1.0], &[0.0], &[true]),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            nll_loss(&[0.0], &[0.0], &[0.0], &[true]),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn constant_class_collapses_sigma_to_floor() {
        let cfg = ModelConfig::default();
        let samples: Vec<(f64, f64)> = (0..100)
            .map(|i| (0.1 + 0.003 * i as f64, 0.4))
            .collect();
        let model = fit_class_model(label(), &samples, &cfg);
        assert!(!model.is_prior);
        assert_eq!(model.sigma, cfg.sigma_floor);
        for v in [0.1, 0.2, 0.35] {
            assert_abs_diff_eq!(model.predict(v).0, 0.4, epsilon = 1e-6);
        }
    }

    #[test]
    fn paired_residuals_give_their_rms_as_sigma() {
        // Two samples at each speed, +0.1 and -0.1 around 0.4: least squares
        // passes through the midpoints, so residuals are exactly +-0.1.
        let cfg = ModelConfig::default();
        let mut samples = Vec::new();
        for i in 0..16 {
            let v = 0.1 + 0.02 * i as f64;
            samples.push((v, 0.5));
            samples.push((v, 0.3));
        }
        let model = fit_class_model(label(), &samples, &cfg);
        assert!(!model.is_prior);
        assert_abs_diff_eq!(model.sigma, 0.1, epsilon = 1e-6);
    }

    #[test]
    fn small_sample_class_stays_prior() {
        let cfg = ModelConfig::default();
        let samples: Vec<(f64, f64)> = (0..5).map(|i| (0.1 + 0.05 * i as f64, 0.6)).collect();
        let model = fit_class_model(label(), &samples, &cfg);
        assert!(model.is_prior);
        assert_eq!(model.predict(0.3), (cfg.prior_mean, cfg.prior_sigma));
    }

    #[test]
    fn degenerate_speeds_fall_back_to_constant_mean() {
        let cfg = ModelConfig::default();
        let samples: Vec<(f64, f64)> = (0..40)
            .map(|i| (0.25, if i % 2 == 0 { 0.5 } else { 0.3 }))
            .collect();
        let model = fit_class_model(label(), &samples, &cfg);
        assert!(!model.is_prior);
        assert_abs_diff_eq!(model.predict(0.25).0, 0.4, epsilon = 1e-12);
        assert_abs_diff_eq!(model.sigma, 0.1, epsilon = 1e-12);
    }

    /// The analytic sigma beats every candidate on a dense grid.
    #[test]
    fn fitted_sigma_minimizes_nll_on_grid() {
        let cfg = ModelConfig::default();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..10 {
            let n = rng.random_range(5..200);
            let residuals: Vec<f64> = (0..n)
                .map(|_| {
                    let z: f64 = StandardNormal.sample(&mut rng);
                    z * rng.random_range(0.01..0.3)
                })
                .collect();
            let rms = (residuals.iter().map(|r| r * r).sum::<f64>() / n as f64).sqrt();
            let sigma_star = rms.max(cfg.sigma_floor);
            let loss = |sigma: f64| -> f64 {
                residuals
                    .iter()
                    .map(|r| nll_point(*r, sigma, 0.0))
                    .sum::<f64>()
            };
            let best = loss(sigma_star);
            for k in 1..=1000 {
                let sigma = k as f64 * 0.001;
                assert!(
                    best <= loss(sigma) + 1e-12,
                    "sigma {sigma} beats analytic {sigma_star}"
                );
            }
        }
    }

    /// Moving sigma toward the RMS residual never increases the loss.
    #[test]
    fn nll_is_unimodal_along_sigma() {
        let residuals = [0.05, -0.1, 0.2, -0.02, 0.08];
        let rms =
            (residuals.iter().map(|r| r * r).sum::<f64>() / residuals.len() as f64).sqrt();
        let loss = |sigma: f64| -> f64 {
            residuals.iter().map(|r| nll_point(*r, sigma, 0.0)).sum()
        };
        let mut prev = loss(0.001);
        let mut sigma = 0.001;
        while sigma < rms {
            sigma += 0.001;
            let l = loss(sigma.min(rms));
            assert!(l <= prev + 1e-12);
            prev = l;
        }
        let mut prev = loss(1.0);
        let mut sigma = 1.0;
        while sigma > rms {
            sigma -= 0.001;
            let l = loss(sigma.max(rms));
            assert!(l <= prev + 1e-12);
            prev = l;
        }
    }

    #[test]
    fn estimator_refits_after_threshold_and_flips_prior() {
        let cfg = ModelConfig {
            n_min: 30,
            refit_every: 50,
            ..ModelConfig::default()
        };
        let mut estimator = SlipEstimator::new(cfg).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let curve = |v: f64| 0.5 * (1.0 - (-2.0 * v).exp());
        let batch: Vec<SlipSample> = (0..49)
            .map(|_| {
                let v = rng.random_range(0.1..0.4);
                sample_at(v, curve(v))
            })
            .collect();
        estimator.insert(&batch);
        // 49 < refit_every: nothing fitted yet.
        assert!(estimator.registry().is_empty());
        estimator.insert(&batch[..1].to_vec());
        let model = estimator.registry().get(&label()).unwrap();
        assert!(!model.is_prior, "50 samples >= n_min should leave the prior");
    }

    #[test]
    fn update_models_without_new_data_is_a_no_op() {
        let mut estimator = SlipEstimator::new(ModelConfig::default()).unwrap();
        estimator.update_models();
        assert!(estimator.registry().is_empty());
        let before = estimator.clone();
        estimator.update_models();
        assert_eq!(before, estimator);
    }

    #[test]
    fn fitted_class_tracks_planted_curve() {
        let cfg = ModelConfig {
            refit_every: 10_000,
            ..ModelConfig::default()
        };
        let mut estimator = SlipEstimator::new(cfg).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let curve = |v: f64| 0.5 * (1.0 - (-2.0 * v).exp());
        let batch: Vec<SlipSample> = (0..500)
            .map(|_| {
                let v = rng.random_range(0.1..0.5);
                let z: f64 = StandardNormal.sample(&mut rng);
                sample_at(v, (curve(v) + 0.02 * z).clamp(0.0, 0.95))
            })
            .collect();
        estimator.insert(&batch);
        estimator.update_models();
        let model = estimator.registry().get(&label()).unwrap();
        let mut v = 0.1;
        let mut worst: f64 = 0.0;
        while v <= 0.5 {
            worst = worst.max((model.predict(v).0 - curve(v)).abs());
            v += 0.002;
        }
        assert!(worst <= 0.05, "max abs error {worst}");
    }

    #[test]
    fn priorities_stay_finite_and_nonnegative() {
        let mut estimator = SlipEstimator::new(ModelConfig {
            capacity: 64,
            refit_every: 16,
            ..ModelConfig::default()
        })
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..400 {
            let v = rng.random_range(0.05..0.5);
            let slip = rng.random_range(0.0..0.94);
            estimator.insert(&[sample_at(v, slip)]);
            assert!(estimator.buffer().len() <= 64);
            let total = estimator.buffer().total_priority();
            assert!(total.is_finite() && total >= 0.0);
        }
    }
}
