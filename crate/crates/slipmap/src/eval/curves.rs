//! Slip-versus-speed scatter and fitted-curve export for each catalog soil.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mix_seed;
use crate::sliprisk::{fit_basis_regression, CentersPolicy, GaussianBasisModel};
use crate::terrain::{SoilCatalog, SoilId};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SALT_CURVES: u64 = 0xC0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub soil: SoilId,
    pub speed: f64,
    pub slip: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SoilCurveFit {
    pub soil: SoilId,
    pub name: String,
    pub model: GaussianBasisModel,
}

/// Scatter plus per-soil fitted overlays, ready for external plotting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlipSpeedCurves {
    pub points: Vec<CurvePoint>,
    pub fits: Vec<SoilCurveFit>,
    pub speed_range: (f64, f64),
}

impl SlipSpeedCurves {
    pub fn scatter_csv(&self) -> Result<String> {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record(["soil", "speed", "slip"])?;
        for p in &self.points {
            writer.write_record([
                p.soil.to_string(),
                format!("{}", p.speed),
                format!("{}", p.slip),
            ])?;
        }
        let bytes = writer.into_inner().map_err(|e| Error::Config(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn fits_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.fits)?)
    }
}

/// Sample `n_per_soil` noisy slip measurements per soil over the speed range
/// and fit a basis-regression overlay for each.
pub fn export_slip_speed_curves(
    catalog: &SoilCatalog,
    n_per_soil: usize,
    seed: u64,
) -> Result<SlipSpeedCurves> {
    if n_per_soil == 0 {
        return Err(Error::InvalidArgument("n_per_soil must be at least 1".into()));
    }
    let speed_range = (0.05, 0.5);
    let mut points = Vec::with_capacity(catalog.len() * n_per_soil);
    let mut fits = Vec::with_capacity(catalog.len());
    for (i, soil) in catalog.soils().iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(seed, SALT_CURVES + i as u64));
        let mut pairs = Vec::with_capacity(n_per_soil);
        for _ in 0..n_per_soil {
            let speed = rng.random_range(speed_range.0..=speed_range.1);
            let slip = soil.sample_slip(speed, &mut rng);
            points.push(CurvePoint {
                soil: soil.id,
                speed,
                slip,
            });
            pairs.push((speed, slip));
        }
        if pairs.len() >= 8 {
            let model = fit_basis_regression(&pairs, 8, None, &CentersPolicy::Uniform)?;
            fits.push(SoilCurveFit {
                soil: soil.id,
                name: soil.name.clone(),
                model,
            });
        }
    }
    Ok(SlipSpeedCurves {
        points,
        fits,
        speed_range,
    })
}
