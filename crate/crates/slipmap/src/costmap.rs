//! Slip cost map: per-cell predicted slip mean, std, risk band, and
//! provenance, aligned to a segmentation map.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimator::{ModelConfig, ModelRegistry};
use crate::raster;
use crate::rover::SlipSample;
use crate::segment::SegmentationMap;
use crate::sliprisk::{classify_band, SlipRiskBand};

/// Where a cell's slip estimate came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// Untraversed class, showing the prior band.
    Prior,
    /// Predicted by a fitted class model.
    Predicted,
    /// Backed by in-situ measurements in this cell.
    Observed,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostCell {
    pub mean: f64,
    pub std: f64,
    pub band: SlipRiskBand,
    pub provenance: Provenance,
}

/// Raster of slip cost cells plus the query speed it was built for.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlipCostMap {
    width_m: f64,
    height_m: f64,
    resolution: f64,
    nx: usize,
    ny: usize,
    speed: f64,
    cells: Vec<CostCell>,
}

impl SlipCostMap {
    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn resolution(&self) -> f64 {
        self.resolution
    }

    pub fn speed(&self) -> f64 {
        self.speed
    }

    pub fn cells(&self) -> &[CostCell] {
        &self.cells
    }

    pub fn cell(&self, col: usize, row: usize) -> &CostCell {
        &self.cells[row * self.nx + col]
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Jet-colormap PNG over the per-cell mean (0 = blue, 1 = red; prior
    /// cells sit in the cyan range).
    pub fn to_png(&self) -> Result<Vec<u8>> {
        let mut rgb = Vec::with_capacity(self.cells.len() * 3);
        for cell in &self.cells {
            rgb.extend_from_slice(&raster::jet_color(cell.mean));
        }
        raster::encode_png_rgb(self.nx, self.ny, &rgb)
    }

    /// PGM of band indices (1..=5, maxval 5).
    pub fn bands_to_pgm(&self) -> Vec<u8> {
        let pixels: Vec<u8> = self.cells.iter().map(|c| c.band.index()).collect();
        raster::encode_pgm(self.nx, self.ny, 5, &pixels)
    }

    /// Overlay in-situ measurements: cells containing samples switch to
    /// `Observed` provenance with the empirical mean/std of their samples
    /// (std floored at `sigma_floor`). Returns a new map.
    pub fn with_observations(&self, samples: &[SlipSample], sigma_floor: f64) -> Self {
        let mut per_cell: std::collections::BTreeMap<usize, Vec<f64>> =
            std::collections::BTreeMap::new();
        for sample in samples {
            if sample.x < 0.0
                || sample.x >= self.width_m
                || sample.y < 0.0
                || sample.y >= self.height_m
            {
                continue;
            }
            let col = ((sample.x / self.resolution) as usize).min(self.nx - 1);
            let row = ((sample.y / self.resolution) as usize).min(self.ny - 1);
            per_cell.entry(row * self.nx + col).or_default().push(sample.slip);
        }
        let mut out = self.clone();
        for (idx, slips) in per_cell {
            let n = slips.len() as f64;
            let mean = (slips.iter().sum::<f64>() / n).clamp(0.0, 1.0);
            let var = slips.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / n;
            out.cells[idx] = CostCell {
                mean,
                std: var.sqrt().max(sigma_floor),
                band: classify_band(mean).expect("mean clamped to [0, 1]"),
                provenance: Provenance::Observed,
            };
        }
        out
    }
}

/// Build the slip cost map for one segmentation map at commanded speed `v`.
/// Pure: identical inputs produce identical rasters.
pub fn build_slip_cost_map(
    seg: &SegmentationMap,
    registry: &ModelRegistry,
    cfg: &ModelConfig,
    v: f64,
) -> Result<SlipCostMap> {
    if !(v > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "query speed must be positive, got {v}"
        )));
    }
    let mut cells = Vec::with_capacity(seg.labels().len());
    for label in seg.labels() {
        let model = registry.model_for(label, cfg);
        let cell = if model.is_prior {
            CostCell {
                mean: cfg.prior_mean,
                std: cfg.prior_sigma,
                band: classify_band(cfg.prior_mean)?,
                provenance: Provenance::Prior,
            }
        } else {
            let (mean, std) = model.predict(v);
            CostCell {
                mean,
                std,
                band: classify_band(mean)?,
                provenance: Provenance::Predicted,
            }
        };
        cells.push(cell);
    }
    Ok(SlipCostMap {
        width_m: seg.width_m(),
        height_m: seg.height_m(),
        resolution: seg.resolution(),
        nx: seg.nx(),
        ny: seg.ny(),
        speed: v,
        cells,
    })
}
