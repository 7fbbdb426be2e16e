//! Slip math: slip ratio, the five risk bands, Gaussian-basis regression,
//! MAE, and speed-threshold shifting.
//!
//! The regression model is `y(x, w) = sum_j w_j * phi_j(x)` with a constant
//! bias basis `phi_0 = 1` and Gaussian bumps
//! `phi_j(x) = exp(-(x - mu_j)^2 / (2 t^2))` for `j >= 1`. Weights minimize
//! the least-squares objective `E(w) = 1/2 * sum_n (s_n - y(x_n, w))^2`,
//! solved through ridge-stabilized normal equations.

use nalgebra::{Cholesky, DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ridge term added to the normal equations for conditioning; its effect is
/// orders of magnitude below test tolerances.
pub const RIDGE_LAMBDA: f64 = 1e-8;

/// Positive slip means the rover travels slower than commanded (driving);
/// values are negative under braking and clamped to [-1, 1].
pub fn slip_ratio(v_x: f64, v_ref: f64) -> Result<f64> {
    if !(v_ref > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "v_ref must be positive, got {v_ref}"
        )));
    }
    Ok(((v_ref - v_x) / v_ref).clamp(-1.0, 1.0))
}

/// One of the five slip risk categories.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[repr(u8)]
pub enum SlipRiskBand {
    VeryLow = 1,
    Low = 2,
    Moderate = 3,
    High = 4,
    Severe = 5,
}

impl SlipRiskBand {
    pub fn index(self) -> u8 {
        self as u8
    }

    pub fn from_index(index: u8) -> Option<Self> {
        match index {
            1 => Some(SlipRiskBand::VeryLow),
            2 => Some(SlipRiskBand::Low),
            3 => Some(SlipRiskBand::Moderate),
            4 => Some(SlipRiskBand::High),
            5 => Some(SlipRiskBand::Severe),
            _ => None,
        }
    }
}

impl Serialize for SlipRiskBand {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_u8(self.index())
    }
}

impl<'de> Deserialize<'de> for SlipRiskBand {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let idx = u8::deserialize(deserializer)?;
        SlipRiskBand::from_index(idx)
            .ok_or_else(|| serde::de::Error::custom(format!("band index {idx} outside 1..=5")))
    }
}

/// Classify a non-negative slip value into its risk band. Intervals are
/// left-open/right-closed: (0, 0.2], (0.2, 0.4], (0.4, 0.6], (0.6, 0.8],
/// and (0.8, ..) for the severe band; boundary values belong to the lower
/// band. Zero slip maps to the lowest band.
pub fn classify_band(s: f64) -> Result<SlipRiskBand> {
    if s < 0.0 || !s.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "slip must be finite and non-negative, got {s}"
        )));
    }
    Ok(if s <= 0.2 {
        SlipRiskBand::VeryLow
    } else if s <= 0.4 {
        SlipRiskBand::Low
    } else if s <= 0.6 {
        SlipRiskBand::Moderate
    } else if s <= 0.8 {
        SlipRiskBand::High
    } else {
        SlipRiskBand::Severe
    })
}

/// Fit diagnostics attached to a fitted model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitDiagnostics {
    /// Least-squares objective 1/2 * sum of squared residuals.
    pub objective: f64,
    /// Root-mean-square residual over the fitted samples.
    pub residual_std: f64,
}

/// Gaussian-basis regression model over speed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianBasisModel {
    /// `w_0` multiplies the constant bias basis; `w_j` for `j >= 1` pair with
    /// `centers[j - 1]`.
    weights: Vec<f64>,
    /// Strictly increasing basis locations (m/s); empty for a bias-only model.
    centers: Vec<f64>,
    /// Spatial scale `t` shared by all Gaussian bases.
    scale: f64,
    /// Speed interval the model was fitted on.
    speed_range: (f64, f64),
    pub diagnostics: FitDiagnostics,
}

impl GaussianBasisModel {
    pub fn from_parts(
        weights: Vec<f64>,
        centers: Vec<f64>,
        scale: f64,
        speed_range: (f64, f64),
    ) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidArgument("model needs at least a bias weight".into()));
        }
        if weights.len() != centers.len() + 1 {
            return Err(Error::InvalidArgument(format!(
                "{} weights need {} centers, got {}",
                weights.len(),
                weights.len() - 1,
                centers.len()
            )));
        }
        if !(scale > 0.0) {
            return Err(Error::InvalidArgument(format!("scale must be positive, got {scale}")));
        }
        if centers.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidArgument("centers must be strictly increasing".into()));
        }
        if speed_range.1 < speed_range.0 {
            return Err(Error::InvalidArgument("speed range inverted".into()));
        }
        Ok(Self {
            weights,
            centers,
            scale,
            speed_range,
            diagnostics: FitDiagnostics {
                objective: 0.0,
                residual_std: 0.0,
            },
        })
    }

    /// Bias-only model predicting `value` at every speed.
    pub fn constant(value: f64, speed_range: (f64, f64)) -> Self {
        Self::from_parts(vec![value], Vec::new(), 1.0, speed_range)
            .expect("constant model is valid")
    }

    pub fn basis_count(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn centers(&self) -> &[f64] {
        &self.centers
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn speed_range(&self) -> (f64, f64) {
        self.speed_range
    }

    fn basis(&self, v: f64, j: usize) -> f64 {
        if j == 0 {
            1.0
        } else {
            let d = v - self.centers[j - 1];
            (-d * d / (2.0 * self.scale * self.scale)).exp()
        }
    }

    /// Raw prediction `y(v, w)`.
    pub fn predict(&self, v: f64) -> f64 {
        (0..self.weights.len())
            .map(|j| self.weights[j] * self.basis(v, j))
            .sum()
    }

    /// Prediction clamped to the valid slip range [0, 1] for risk use.
    pub fn predict_clamped(&self, v: f64) -> f64 {
        self.predict(v).clamp(0.0, 1.0)
    }

    /// Analytic derivative dy/dv.
    pub fn derivative(&self, v: f64) -> f64 {
        (1..self.weights.len())
            .map(|j| {
                let d = v - self.centers[j - 1];
                self.weights[j] * self.basis(v, j) * (-d / (self.scale * self.scale))
            })
            .sum()
    }
}

/// Placement policy for basis centers.
#[derive(Debug, Clone, PartialEq)]
pub enum CentersPolicy {
    /// Spread `M - 1` centers uniformly over the sampled speed range.
    Uniform,
    Explicit(Vec<f64>),
}

fn uniform_centers(min: f64, max: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![0.5 * (min + max)],
        _ => (0..count)
            .map(|i| min + (max - min) * i as f64 / (count - 1) as f64)
            .collect(),
    }
}

/// Fit a Gaussian-basis model to `(speed, slip)` samples by solving the
/// ridge-stabilized normal equations. `scale = None` picks
/// `(range / M) * 0.8`.
pub fn fit_basis_regression(
    samples: &[(f64, f64)],
    basis_count: usize,
    scale: Option<f64>,
    centers: &CentersPolicy,
) -> Result<GaussianBasisModel> {
    if basis_count == 0 {
        return Err(Error::InvalidArgument("basis_count must be at least 1".into()));
    }
    if samples.len() < basis_count {
        return Err(Error::InsufficientData {
            needed: basis_count,
            got: samples.len(),
        });
    }
    let min = samples.iter().map(|s| s.0).fold(f64::INFINITY, f64::min);
    let max = samples.iter().map(|s| s.0).fold(f64::NEG_INFINITY, f64::max);
    if !(min.is_finite() && max.is_finite()) {
        return Err(Error::InvalidArgument("non-finite speeds in samples".into()));
    }
    if basis_count > 1 && max - min < 1e-12 {
        return Err(Error::DegenerateDesign(format!(
            "all {} speeds equal {min}",
            samples.len()
        )));
    }

    let scale = match scale {
        Some(t) if t > 0.0 => t,
        Some(t) => {
            return Err(Error::InvalidArgument(format!("scale must be positive, got {t}")));
        }
        None => {
            let span = (max - min).max(1e-6);
            (span / basis_count as f64) * 0.8
        }
    };
    let centers = match centers {
        CentersPolicy::Uniform => uniform_centers(min, max, basis_count - 1),
        CentersPolicy::Explicit(c) => {
            if c.len() != basis_count - 1 {
                return Err(Error::InvalidArgument(format!(
                    "expected {} explicit centers, got {}",
                    basis_count - 1,
                    c.len()
                )));
            }
            c.clone()
        }
    };

    let mut model = GaussianBasisModel::from_parts(
        vec![0.0; basis_count],
        centers,
        scale,
        (min, max),
    )?;

    let n = samples.len();
    let phi = DMatrix::from_fn(n, basis_count, |i, j| model.basis(samples[i].0, j));
    let targets = DVector::from_fn(n, |i, _| samples[i].1);
    let gram = phi.transpose() * &phi;
    let regularized = &gram + DMatrix::identity(basis_count, basis_count) * RIDGE_LAMBDA;
    let rhs = phi.transpose() * &targets;
    let cholesky = Cholesky::new(regularized.clone());
    let solve = |b: &DVector<f64>| -> Result<DVector<f64>> {
        match &cholesky {
            Some(chol) => Ok(chol.solve(b)),
            None => regularized
                .clone()
                .lu()
                .solve(b)
                .ok_or_else(|| Error::DegenerateDesign("normal equations singular".into())),
        }
    };
    let mut weights = solve(&rhs)?;
    // Iterative refinement strips the ridge bias from well-conditioned
    // directions while the ridge keeps the factorization solvable.
    for _ in 0..2 {
        let residual = &rhs - &gram * &weights;
        weights += solve(&residual)?;
    }
    model.weights = weights.iter().copied().collect();

    let residuals = &targets - phi * weights;
    let sse: f64 = residuals.iter().map(|r| r * r).sum();
    model.diagnostics = FitDiagnostics {
        objective: 0.5 * sse,
        residual_std: (sse / n as f64).sqrt(),
    };
    Ok(model)
}

/// Mean absolute error between estimates and ground truth.
pub fn mae(estimates: &[f64], truths: &[f64]) -> Result<f64> {
    if estimates.is_empty() || estimates.len() != truths.len() {
        return Err(Error::InvalidArgument(format!(
            "mae needs equal non-empty lengths, got {} and {}",
            estimates.len(),
            truths.len()
        )));
    }
    let total: f64 = estimates
        .iter()
        .zip(truths)
        .map(|(g, h)| (g - h).abs())
        .sum();
    Ok(total / estimates.len() as f64)
}

/// Evaluate the risk curve shifted along the speed axis by the
/// speed-estimation MAE: `s' = f(v - sigma)`, clamped to [0, 1].
pub fn shift_threshold(model: &GaussianBasisModel, sigma: f64, v: f64) -> Result<f64> {
    if sigma < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "sigma must be non-negative, got {sigma}"
        )));
    }
    Ok(model.predict_clamped(v - sigma))
}

/// Both shift directions, `(f(v - sigma), f(v + sigma))`, for diagnostics.
pub fn shift_threshold_bounds(
    model: &GaussianBasisModel,
    sigma: f64,
    v: f64,
) -> Result<(f64, f64)> {
    if sigma < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "sigma must be non-negative, got {sigma}"
        )));
    }
    Ok((model.predict_clamped(v - sigma), model.predict_clamped(v + sigma)))
}

/// Smallest speed in the fitted range where the predicted slip reaches
/// `boundary`, located on a 1e-3 m/s grid and refined by bisection.
/// Returns `None` when the boundary is never reached.
pub fn speed_for_band_boundary(model: &GaussianBasisModel, boundary: f64) -> Option<f64> {
    const GRID_STEP: f64 = 1e-3;
    let (lo, hi) = model.speed_range();
    if model.predict_clamped(lo) >= boundary {
        return Some(lo);
    }
    let steps = ((hi - lo) / GRID_STEP).ceil() as usize;
    let mut prev = lo;
    for i in 1..=steps {
        let v = (lo + i as f64 * GRID_STEP).min(hi);
        if model.predict_clamped(v) >= boundary {
            // Bisect the bracketing grid interval down to 1e-9.
            let (mut a, mut b) = (prev, v);
            while b - a > 1e-9 {
                let mid = 0.5 * (a + b);
                if model.predict_clamped(mid) >= boundary {
                    b = mid;
                } else {
                    a = mid;
                }
            }
            return Some(b);
        }
        prev = v;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    #[test]
    fn slip_ratio_examples() {
        assert_eq!(slip_ratio(0.5, 0.5).unwrap(), 0.0);
        assert_abs_diff_eq!(slip_ratio(0.3, 0.5).unwrap(), 0.4, epsilon = 1e-12);
        assert_eq!(slip_ratio(0.0, 0.5).unwrap(), 1.0);
        // Braking reports negative slip.
        assert_abs_diff_eq!(slip_ratio(0.6, 0.5).unwrap(), -0.2, epsilon = 1e-12);
        // Clamped to [-1, 1].
        assert_eq!(slip_ratio(2.0, 0.5).unwrap(), -1.0);
        assert_eq!(slip_ratio(-1.0, 0.5).unwrap(), 1.0);
        assert!(matches!(slip_ratio(0.1, 0.0), Err(Error::InvalidArgument(_))));
        assert!(matches!(slip_ratio(0.1, -0.2), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn band_boundaries_are_right_closed() {
        assert_eq!(classify_band(0.2).unwrap(), SlipRiskBand::VeryLow);
        assert_eq!(classify_band(0.41).unwrap(), SlipRiskBand::Moderate);
        assert_eq!(classify_band(0.95).unwrap(), SlipRiskBand::Severe);
        assert_eq!(classify_band(0.0).unwrap(), SlipRiskBand::VeryLow);
        assert_eq!(classify_band(0.4).unwrap(), SlipRiskBand::Low);
        assert_eq!(classify_band(0.6).unwrap(), SlipRiskBand::Moderate);
        assert_eq!(classify_band(0.8).unwrap(), SlipRiskBand::High);
        assert_eq!(classify_band(1.0).unwrap(), SlipRiskBand::Severe);
        assert!(matches!(classify_band(-0.01), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn refit_reproduces_realizable_target() {
        // Build a known model, sample it exactly, refit, compare predictions.
        let truth = GaussianBasisModel::from_parts(
            vec![0.1, 0.3, -0.2, 0.25],
            vec![0.1, 0.3, 0.5],
            0.1,
            (0.05, 0.55),
        )
        .unwrap();
        let samples: Vec<(f64, f64)> = (0..60)
            .map(|i| {
                let v = 0.05 + 0.5 * i as f64 / 59.0;
                (v, truth.predict(v))
            })
            .collect();
        let fit = fit_basis_regression(
            &samples,
            4,
            Some(0.1),
            &CentersPolicy::Explicit(vec![0.1, 0.3, 0.5]),
        )
        .unwrap();
        for &(v, s) in &samples {
            assert_abs_diff_eq!(fit.predict(v), s, epsilon = 1e-8);
        }
    }

    #[test]
    fn constant_samples_absorbed_by_bias() {
        let samples: Vec<(f64, f64)> = (0..40)
            .map(|i| (0.1 + 0.01 * i as f64, 0.3))
            .collect();
        let fit = fit_basis_regression(&samples, 8, None, &CentersPolicy::Uniform).unwrap();
        for i in 0..40 {
            let v = 0.1 + 0.01 * i as f64;
            assert_abs_diff_eq!(fit.predict(v), 0.3, epsilon = 1e-8);
        }
    }

    #[test]
    fn fit_rejects_insufficient_and_degenerate_data() {
        let few: Vec<(f64, f64)> = vec![(0.1, 0.1), (0.2, 0.2)];
        assert!(matches!(
            fit_basis_regression(&few, 4, None, &CentersPolicy::Uniform),
            Err(Error::InsufficientData { needed: 4, got: 2 })
        ));
        let flat: Vec<(f64, f64)> = (0..10).map(|i| (0.3, 0.1 * i as f64)).collect();
        assert!(matches!(
            fit_basis_regression(&flat, 4, None, &CentersPolicy::Uniform),
            Err(Error::DegenerateDesign(_))
        ));
    }

    /// Planted-curve recovery; the oracle is the generator itself.
    #[test]
    fn planted_curve_recovered_within_tolerance() {
        let planted = |v: f64| 0.5 * (1.0 - (-2.0 * v).exp());
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let samples: Vec<(f64, f64)> = (0..500)
            .map(|_| {
                let v = rng.random_range(0.1..0.5);
                let z: f64 = StandardNormal.sample(&mut rng);
                (v, planted(v) + 0.02 * z)
            })
            .collect();
        let fit = fit_basis_regression(&samples, 8, Some(0.08), &CentersPolicy::Uniform).unwrap();
        let mut worst: f64 = 0.0;
        let mut v = 0.1;
        while v <= 0.5 {
            worst = worst.max((fit.predict(v) - planted(v)).abs());
            v += 1e-3;
        }
        assert!(worst <= 0.03, "max abs error {worst}");
        // Example point: v = 0.4 on the planted curve.
        assert_abs_diff_eq!(fit.predict(0.4), planted(0.4), epsilon = 0.03);
    }

    #[test]
    fn predict_constant_and_zero_models() {
        let zero =
            GaussianBasisModel::from_parts(vec![0.0, 0.0], vec![0.3], 0.1, (0.0, 1.0)).unwrap();
        for v in [-1.0, 0.0, 0.5, 10.0] {
            assert_eq!(zero.predict(v), 0.0);
        }
        let constant = GaussianBasisModel::constant(0.3, (0.0, 1.0));
        for v in [0.0, 0.25, 0.9] {
            assert_eq!(constant.predict(v), 0.3);
        }
    }

    #[test]
    fn mae_examples() {
        let g = [0.5, 0.7];
        let h = [0.4, 0.9];
        assert_abs_diff_eq!(mae(&g, &h).unwrap(), 0.15, epsilon = 1e-12);
        assert_eq!(mae(&[1.0, 1.0, 1.0], &[0.0, 0.0, 0.0]).unwrap(), 1.0);
        assert_eq!(mae(&g, &g).unwrap(), 0.0);
        assert!(matches!(mae(&[], &[]), Err(Error::InvalidArgument(_))));
        assert!(matches!(mae(&g, &[0.1]), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn shift_threshold_identities() {
        let constant = GaussianBasisModel::constant(0.3, (0.0, 1.0));
        for sigma in [0.0, 0.05, 0.2] {
            assert_eq!(shift_threshold(&constant, sigma, 0.4).unwrap(), 0.3);
        }
        let fitted = fit_basis_regression(
            &(0..100)
                .map(|i| {
                    let v = 0.0 + i as f64 / 99.0;
                    (v, 0.5 * (1.0 - (-2.0 * v).exp()))
                })
                .collect::<Vec<_>>(),
            10,
            None,
            &CentersPolicy::Uniform,
        )
        .unwrap();
        // Zero shift is the identity.
        assert_eq!(
            shift_threshold(&fitted, 0.0, 0.4).unwrap(),
            fitted.predict_clamped(0.4)
        );
        // Shifted evaluation equals the curve at v - sigma.
        assert_abs_diff_eq!(
            shift_threshold(&fitted, 0.05, 0.4).unwrap(),
            fitted.predict_clamped(0.35),
            epsilon = 1e-12
        );
        let (lo, hi) = shift_threshold_bounds(&fitted, 0.05, 0.4).unwrap();
        assert_abs_diff_eq!(lo, fitted.predict_clamped(0.35), epsilon = 1e-12);
        assert_abs_diff_eq!(hi, fitted.predict_clamped(0.45), epsilon = 1e-12);
        assert!(matches!(
            shift_threshold(&fitted, -0.1, 0.4),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn band_boundary_speed_on_constant_models() {
        let above = GaussianBasisModel::constant(0.3, (0.1, 0.5));
        assert_eq!(speed_for_band_boundary(&above, 0.2), Some(0.1));
        let below = GaussianBasisModel::constant(0.1, (0.1, 0.5));
        assert_eq!(speed_for_band_boundary(&below, 0.2), None);
    }

    #[test]
    fn band_boundary_speed_matches_analytic_inversion() {
        // Fit the planted curve densely and noiselessly over [0, 1.2] so the
        // boundary crossing sits inside the fitted range.
        let planted = |v: f64| 0.5 * (1.0 - (-2.0 * v).exp());
        let samples: Vec<(f64, f64)> = (0..400)
            .map(|i| {
                let v = 1.2 * i as f64 / 399.0;
                (v, planted(v))
            })
            .collect();
        let fit = fit_basis_regression(&samples, 14, None, &CentersPolicy::Uniform).unwrap();
        let expected = -(0.2f64).ln() / 2.0; // planted curve hits 0.4 here
        let found = speed_for_band_boundary(&fit, 0.4).expect("boundary reached");
        assert_abs_diff_eq!(found, expected, epsilon = 0.01);
    }

    #[test]
    fn finite_differences_match_analytic_derivative() {
        let model = fit_basis_regression(
            &(0..200)
                .map(|i| {
                    let v = 0.05 + 0.5 * i as f64 / 199.0;
                    (v, 0.5 * (1.0 - (-2.0 * v).exp()))
                })
                .collect::<Vec<_>>(),
            8,
            Some(0.08),
            &CentersPolicy::Uniform,
        )
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let h = 1e-5;
        for _ in 0..100 {
            let v = rng.random_range(0.05..0.55);
            let fd = (model.predict(v + h) - model.predict(v - h)) / (2.0 * h);
            assert_abs_diff_eq!(fd, model.derivative(v), epsilon = 1e-5);
        }
    }

    #[test]
    fn band_of_prediction_monotone_for_monotone_fit() {
        // A bias plus a single rising Gaussian shoulder is monotone on the
        // range left of the center.
        let model = GaussianBasisModel::from_parts(vec![0.05, 0.9], vec![0.7], 0.3, (0.0, 0.7))
            .unwrap();
        let check_monotone_bands = |model: &GaussianBasisModel| {
            let (lo, hi) = model.speed_range();
            let grid: Vec<f64> = (0..=500).map(|i| lo + (hi - lo) * i as f64 / 500.0).collect();
            let monotone = grid
                .windows(2)
                .all(|w| model.predict_clamped(w[1]) >= model.predict_clamped(w[0]) - 1e-12);
            if !monotone {
                return;
            }
            let mut last = 0;
            for &v in &grid {
                let band = classify_band(model.predict_clamped(v)).unwrap().index();
                assert!(band >= last, "band dropped from {last} to {band} at {v}");
                last = band;
            }
        };
        let grid: Vec<f64> = (0..=500).map(|i| 0.7 * i as f64 / 500.0).collect();
        assert!(
            grid.windows(2).all(|w| model.predict(w[1]) >= model.predict(w[0])),
            "shoulder model must be monotone by construction"
        );
        check_monotone_bands(&model);
        // Same conditional property on a fitted saturating curve.
        let samples: Vec<(f64, f64)> = (0..300)
            .map(|i| {
                let v = 0.05 + 0.6 * i as f64 / 299.0;
                (v, 0.9 * (1.0 - (-4.0 * v).exp()))
            })
            .collect();
        let fit = fit_basis_regression(&samples, 8, None, &CentersPolicy::Uniform).unwrap();
        check_monotone_bands(&fit);
    }

    proptest! {
        #[test]
        fn mae_is_permutation_invariant(values in proptest::collection::vec((0.0f64..1.0, 0.0f64..1.0), 1..40)) {
            let g: Vec<f64> = values.iter().map(|p| p.0).collect();
            let h: Vec<f64> = values.iter().map(|p| p.1).collect();
            let base = mae(&g, &h).unwrap();
            let mut reversed_g = g.clone();
            let mut reversed_h = h.clone();
            reversed_g.reverse();
            reversed_h.reverse();
            prop_assert!((mae(&reversed_g, &reversed_h).unwrap() - base).abs() < 1e-12);
        }

        #[test]
        fn mae_satisfies_triangle_bound(values in proptest::collection::vec((0.0f64..1.0, 0.0f64..1.0, 0.0f64..1.0), 1..40)) {
            let g: Vec<f64> = values.iter().map(|p| p.0).collect();
            let h: Vec<f64> = values.iter().map(|p| p.1).collect();
            let k: Vec<f64> = values.iter().map(|p| p.2).collect();
            prop_assert!(mae(&g, &h).unwrap() <= mae(&g, &k).unwrap() + mae(&k, &h).unwrap() + 1e-12);
        }
    }
}

