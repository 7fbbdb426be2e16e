//! Segmentation proxy: converts terrain into observed class labels.
//!
//! This stands in for an image-segmentation front end. Annotated soils map to
//! their own label with a configurable confusion probability of being
//! mislabeled as the feature-nearest other annotated soil. Soils absent from
//! the annotation set are assigned pseudo-classes by online clustering of
//! noisy per-cell visual features: a feature joins the nearest existing
//! cluster within `tau`, otherwise it founds a new one. Cluster centers are
//! running means of their assigned features.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::terrain::{SoilCatalog, SoilId, TerrainGrid, FEATURE_DIM};

/// An observed terrain class: either an annotated soil id or a pseudo-class
/// created for unannotated terrain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassLabel {
    Soil(SoilId),
    Pseudo(u32),
}

impl std::fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ClassLabel::Soil(id) => write!(f, "soil-{id}"),
            ClassLabel::Pseudo(k) => write!(f, "U{k}"),
        }
    }
}

/// The subset of soil ids that carry annotations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnotationSet {
    annotated: BTreeSet<SoilId>,
}

impl AnnotationSet {
    pub fn new(annotated: impl IntoIterator<Item = SoilId>) -> Result<Self> {
        let annotated: BTreeSet<SoilId> = annotated.into_iter().collect();
        if annotated.is_empty() {
            return Err(Error::InvalidArgument(
                "annotation set must contain at least one soil".into(),
            ));
        }
        Ok(Self { annotated })
    }

    /// Annotate `fraction` of the catalog (rounded, at least one soil),
    /// chosen by seeded shuffle.
    pub fn from_seed(catalog: &SoilCatalog, fraction: f64, seed: u64) -> Result<Self> {
        if !(0.0..=1.0).contains(&fraction) {
            return Err(Error::InvalidArgument(format!(
                "annotation fraction {fraction} outside [0, 1]"
            )));
        }
        let mut ids = catalog.ids();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        ids.shuffle(&mut rng);
        let count = ((catalog.len() as f64 * fraction).round() as usize)
            .clamp(1, catalog.len());
        Self::new(ids.into_iter().take(count))
    }

    pub fn all(catalog: &SoilCatalog) -> Self {
        Self {
            annotated: catalog.ids().into_iter().collect(),
        }
    }

    /// Every catalog soil except `excluded`.
    pub fn all_except(catalog: &SoilCatalog, excluded: SoilId) -> Result<Self> {
        Self::new(catalog.ids().into_iter().filter(|id| *id != excluded))
    }

    pub fn contains(&self, id: SoilId) -> bool {
        self.annotated.contains(&id)
    }

    pub fn ids(&self) -> impl Iterator<Item = SoilId> + '_ {
        self.annotated.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.annotated.len()
    }

    pub fn is_empty(&self) -> bool {
        self.annotated.is_empty()
    }

    pub fn unannotated(&self, catalog: &SoilCatalog) -> Vec<SoilId> {
        catalog
            .ids()
            .into_iter()
            .filter(|id| !self.contains(*id))
            .collect()
    }
}

/// Segmentation proxy knobs grouped for configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SegmentationConfig {
    /// Mislabeling probability for annotated soils.
    pub epsilon_confuse: f64,
    /// Feature-distance threshold for pseudo-class clustering.
    pub tau: f64,
    /// Std of per-cell noise added to soil features.
    pub feature_noise_std: f64,
}

impl Default for SegmentationConfig {
    fn default() -> Self {
        Self {
            epsilon_confuse: 0.05,
            tau: 0.5,
            feature_noise_std: 0.1,
        }
    }
}

impl SegmentationConfig {
    pub fn confusion(&self) -> ConfusionSpec {
        ConfusionSpec {
            epsilon_confuse: self.epsilon_confuse,
        }
    }

    pub fn build_proxy(
        &self,
        catalog: &SoilCatalog,
        annotation: AnnotationSet,
    ) -> Result<SegmentationProxy> {
        SegmentationProxy::new(
            catalog,
            annotation,
            self.confusion(),
            self.tau,
            self.feature_noise_std,
        )
    }
}

/// Per-class probability of mislabeling a cell as the feature-nearest other
/// annotated class.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ConfusionSpec {
    pub epsilon_confuse: f64,
}

impl Default for ConfusionSpec {
    fn default() -> Self {
        Self { epsilon_confuse: 0.05 }
    }
}

impl ConfusionSpec {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..0.5).contains(&self.epsilon_confuse) {
            return Err(Error::InvalidArgument(format!(
                "epsilon_confuse {} outside [0, 0.5)",
                self.epsilon_confuse
            )));
        }
        Ok(())
    }
}

fn feature_distance(a: &[f64; FEATURE_DIM], b: &[f64; FEATURE_DIM]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).powi(2))
        .sum::<f64>()
        .sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct Cluster {
    label: u32,
    center: [f64; FEATURE_DIM],
    count: usize,
}

/// Online registry of pseudo-class clusters. Mutating calls must be
/// externally serialized (single-writer); reads may run concurrently
/// between updates.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PseudoClusters {
    clusters: Vec<Cluster>,
    next_label: u32,
}

impl PseudoClusters {
    pub fn new() -> Self {
        Self {
            clusters: Vec::new(),
            next_label: 1,
        }
    }

    pub fn len(&self) -> usize {
        self.clusters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }

    pub fn labels(&self) -> Vec<ClassLabel> {
        self.clusters
            .iter()
            .map(|c| ClassLabel::Pseudo(c.label))
            .collect()
    }

    /// Assign a feature to the nearest cluster within `tau`, founding a new
    /// cluster otherwise. Centers track the running mean of their members.
    pub fn assign(&mut self, feature: &[f64; FEATURE_DIM], tau: f64) -> Result<ClassLabel> {
        if !(tau > 0.0) {
            return Err(Error::InvalidArgument(format!("tau must be positive, got {tau}")));
        }
        let nearest = self
            .clusters
            .iter_mut()
            .map(|c| (feature_distance(&c.center, feature), c))
            .min_by(|(a, _), (b, _)| a.partial_cmp(b).unwrap());
        if let Some((dist, cluster)) = nearest {
            if dist <= tau {
                cluster.count += 1;
                let k = cluster.count as f64;
                for (c, f) in cluster.center.iter_mut().zip(feature) {
                    *c += (f - *c) / k;
                }
                return Ok(ClassLabel::Pseudo(cluster.label));
            }
        }
        let label = self.next_label;
        self.next_label += 1;
        self.clusters.push(Cluster {
            label,
            center: *feature,
            count: 1,
        });
        Ok(ClassLabel::Pseudo(label))
    }
}

/// Raster of observed class labels with the same geometry as its source grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SegmentationMap {
    width_m: f64,
    height_m: f64,
    resolution: f64,
    nx: usize,
    ny: usize,
    labels: Vec<ClassLabel>,
}

impl SegmentationMap {
    pub fn width_m(&self) -> f64 {
        self.width_m
    }

    pub fn height_m(&self) -> f64 {
        self.height_m
    }

    pub fn resolution(&self) -> f64 {
        self.resolution
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn labels(&self) -> &[ClassLabel] {
        &self.labels
    }

    pub fn label(&self, col: usize, row: usize) -> ClassLabel {
        self.labels[row * self.nx + col]
    }

    pub fn label_at(&self, x: f64, y: f64) -> Result<ClassLabel> {
        if x < 0.0 || x >= self.width_m || y < 0.0 || y >= self.height_m {
            return Err(Error::OutOfBounds(format!(
                "({x:.3}, {y:.3}) outside segmentation map"
            )));
        }
        Ok(self.label_at_clamped(x, y))
    }

    pub fn label_at_clamped(&self, x: f64, y: f64) -> ClassLabel {
        let x = x.clamp(0.0, self.width_m - 1e-9);
        let y = y.clamp(0.0, self.height_m - 1e-9);
        let col = ((x / self.resolution) as usize).min(self.nx - 1);
        let row = ((y / self.resolution) as usize).min(self.ny - 1);
        self.labels[row * self.nx + col]
    }

    /// Distinct labels in raster order of first appearance, mapped to pixel
    /// values for PGM export.
    pub fn legend(&self) -> Vec<(ClassLabel, u8)> {
        let mut seen = BTreeMap::new();
        let mut legend = Vec::new();
        for label in &self.labels {
            if !seen.contains_key(label) {
                let value = legend.len() as u8;
                seen.insert(*label, value);
                legend.push((*label, value));
            }
        }
        legend
    }

    /// Encode as PGM plus a JSON legend mapping pixel values to labels.
    pub fn to_pgm_with_legend(&self) -> Result<(Vec<u8>, String)> {
        let legend = self.legend();
        let lookup: BTreeMap<ClassLabel, u8> = legend.iter().copied().collect();
        let pixels: Vec<u8> = self.labels.iter().map(|l| lookup[l]).collect();
        let maxval = (legend.len().saturating_sub(1)).max(1) as u8;
        let pgm = crate::raster::encode_pgm(self.nx, self.ny, maxval, &pixels);
        let entries: Vec<serde_json::Value> = legend
            .iter()
            .map(|(label, value)| {
                serde_json::json!({ "pixel": value, "label": label, "name": label.to_string() })
            })
            .collect();
        let json = serde_json::to_string_pretty(&entries)?;
        Ok((pgm, json))
    }
}

/// The segmentation front end: annotation set, confusion model, and the
/// pseudo-class cluster registry that persists across windows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SegmentationProxy {
    annotation: AnnotationSet,
    confusion: ConfusionSpec,
    /// Feature-distance threshold for joining an existing pseudo-cluster.
    tau: f64,
    /// Std of per-cell noise added to soil features before labeling.
    feature_noise_std: f64,
    clusters: PseudoClusters,
    /// Feature-nearest other annotated soil, per annotated soil.
    nearest_other: BTreeMap<SoilId, SoilId>,
}

impl SegmentationProxy {
    pub fn new(
        catalog: &SoilCatalog,
        annotation: AnnotationSet,
        confusion: ConfusionSpec,
        tau: f64,
        feature_noise_std: f64,
    ) -> Result<Self> {
        confusion.validate()?;
        if !(tau > 0.0) {
            return Err(Error::InvalidArgument(format!("tau must be positive, got {tau}")));
        }
        if feature_noise_std < 0.0 {
            return Err(Error::InvalidArgument(
                "feature_noise_std must be non-negative".into(),
            ));
        }
        let mut nearest_other = BTreeMap::new();
        for id in annotation.ids() {
            let this = catalog
                .get(id)
                .ok_or_else(|| Error::InvalidArgument(format!("annotated soil {id} not in catalog")))?;
            let nearest = annotation
                .ids()
                .filter(|other| *other != id)
                .filter_map(|other| catalog.get(other))
                .min_by(|a, b| {
                    feature_distance(&this.visual_feature, &a.visual_feature)
                        .partial_cmp(&feature_distance(&this.visual_feature, &b.visual_feature))
                        .unwrap()
                });
            if let Some(nearest) = nearest {
                nearest_other.insert(id, nearest.id);
            }
        }
        Ok(Self {
            annotation,
            confusion,
            tau,
            feature_noise_std,
            clusters: PseudoClusters::new(),
            nearest_other,
        })
    }

    pub fn annotation(&self) -> &AnnotationSet {
        &self.annotation
    }

    pub fn clusters(&self) -> &PseudoClusters {
        &self.clusters
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// Segment a terrain window into observed class labels. Deterministic for
    /// a fixed rng seed; iterates cells row-major and consumes a fixed number
    /// of draws per cell.
    pub fn segment<R: Rng + ?Sized>(
        &mut self,
        grid: &TerrainGrid,
        catalog: &SoilCatalog,
        rng: &mut R,
    ) -> Result<SegmentationMap> {
        if grid.cells().is_empty() {
            return Err(Error::InvalidArgument("cannot segment an empty window".into()));
        }
        let mut labels = Vec::with_capacity(grid.cells().len());
        for &soil_id in grid.cells() {
            let soil = catalog.get(soil_id).ok_or_else(|| {
                Error::InvalidArgument(format!("terrain soil id {soil_id} missing from catalog"))
            })?;
            let mut feature = soil.visual_feature;
            for f in feature.iter_mut() {
                let z: f64 = StandardNormal.sample(rng);
                *f += z * self.feature_noise_std;
            }
            let confusion_draw: f64 = rng.random_range(0.0..1.0);
            let label = if self.annotation.contains(soil_id) {
                match self.nearest_other.get(&soil_id) {
                    Some(other) if confusion_draw < self.confusion.epsilon_confuse => {
                        ClassLabel::Soil(*other)
                    }
                    _ => ClassLabel::Soil(soil_id),
                }
            } else {
                self.clusters.assign(&feature, self.tau)?
            };
            labels.push(label);
        }
        Ok(SegmentationMap {
            width_m: grid.width_m(),
            height_m: grid.height_m(),
            resolution: grid.resolution(),
            nx: grid.nx(),
            ny: grid.ny(),
            labels,
        })
    }
}
