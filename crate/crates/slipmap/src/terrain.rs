//! Soil catalog and heterogeneous terrain grids.
//!
//! A [`SoilSpec`] carries the ground-truth slip response of one soil type:
//! the expected slip at commanded wheel-surface speed `v` is
//! `s_max * (1 - exp(-rise_rate * v))`, a monotone saturating curve through
//! the origin, and sampled slip adds Gaussian noise clamped into
//! `[0, MAX_TRUE_SLIP]`. Terrains are row-major rasters of soil ids laid out
//! in stripe, Voronoi-patch, or checkerboard patterns.

use rand::Rng;
use rand::seq::SliceRandom;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dimension of the per-soil visual feature vector used by the segmentation proxy.
pub const FEATURE_DIM: usize = 4;

/// Hard cap on sampled (ground-truth) slip; keeps wheels from locking completely.
pub const MAX_TRUE_SLIP: f64 = 0.95;

/// Identifier of a soil type within a catalog.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SoilId(pub u8);

impl std::fmt::Display for SoilId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Ground-truth slip response and appearance of one soil type.
///
/// `friction_angle_deg`, `cohesion_kpa` and `stiffness_modulus_kpa` are
/// carried as metadata only; the slip curve parameters are what drive the
/// simulation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SoilSpec {
    pub id: SoilId,
    pub name: String,
    /// Slip asymptote at high speed, in [0, 1].
    pub s_max: f64,
    /// Curvature of the slip-vs-speed curve, 1/(m/s). Must be positive.
    pub rise_rate: f64,
    /// Standard deviation of per-sample slip noise.
    pub noise_std: f64,
    /// Appearance embedding consumed by the segmentation proxy.
    pub visual_feature: [f64; FEATURE_DIM],
    pub friction_angle_deg: f64,
    pub cohesion_kpa: f64,
    pub stiffness_modulus_kpa: f64,
}

impl SoilSpec {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.s_max) {
            return Err(Error::InvalidArgument(format!(
                "soil {}: s_max {} outside [0, 1]",
                self.id, self.s_max
            )));
        }
        if !(self.rise_rate > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "soil {}: rise_rate must be positive",
                self.id
            )));
        }
        if self.noise_std < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "soil {}: noise_std must be non-negative",
                self.id
            )));
        }
        Ok(())
    }

    /// Expected slip at commanded wheel-surface speed `v` (m/s).
    pub fn expected_slip(&self, v: f64) -> f64 {
        self.s_max * (1.0 - (-self.rise_rate * v).exp())
    }

    /// Draw one noisy slip realization at speed `v`.
    ///
    /// Always consumes exactly one normal draw so rng streams stay aligned
    /// across soils with and without noise.
    pub fn sample_slip<R: Rng + ?Sized>(&self, v: f64, rng: &mut R) -> f64 {
        let z: f64 = StandardNormal.sample(rng);
        (self.expected_slip(v) + z * self.noise_std).clamp(0.0, MAX_TRUE_SLIP)
    }
}

/// Ordered collection of soils; ids must be unique.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SoilCatalog {
    soils: Vec<SoilSpec>,
}

impl SoilCatalog {
    pub fn new(soils: Vec<SoilSpec>) -> Result<Self> {
        if soils.is_empty() {
            return Err(Error::InvalidArgument("catalog must be non-empty".into()));
        }
        for soil in &soils {
            soil.validate()?;
        }
        let mut ids: Vec<u8> = soils.iter().map(|s| s.id.0).collect();
        ids.sort_unstable();
        ids.dedup();
        if ids.len() != soils.len() {
            return Err(Error::InvalidArgument("duplicate soil ids in catalog".into()));
        }
        Ok(Self { soils })
    }

    pub fn soils(&self) -> &[SoilSpec] {
        &self.soils
    }

    pub fn len(&self) -> usize {
        self.soils.len()
    }

    pub fn is_empty(&self) -> bool {
        self.soils.is_empty()
    }

    pub fn get(&self, id: SoilId) -> Option<&SoilSpec> {
        self.soils.iter().find(|s| s.id == id)
    }

    /// Position of `id` in catalog order (used as the raster pixel value).
    pub fn index_of(&self, id: SoilId) -> Option<usize> {
        self.soils.iter().position(|s| s.id == id)
    }

    pub fn ids(&self) -> Vec<SoilId> {
        self.soils.iter().map(|s| s.id).collect()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let catalog: SoilCatalog = serde_json::from_str(text)?;
        Self::new(catalog.soils)
    }
}

/// The default eight-soil catalog: four lunar-like regolith textures and four
/// terrestrial soils. Slip curves are calibrated so that six of the eight
/// soils stay at or below 0.4 expected slip for commanded speeds up to
/// 0.35 m/s, while desert sand plateaus near 0.6.
pub fn default_catalog() -> SoilCatalog {
    let spec = |id: u8,
                name: &str,
                s_max: f64,
                rise_rate: f64,
                noise_std: f64,
                visual_feature: [f64; 4],
                friction_angle_deg: f64,
                cohesion_kpa: f64,
                stiffness_modulus_kpa: f64| SoilSpec {
        id: SoilId(id),
        name: name.to_string(),
        s_max,
        rise_rate,
        noise_std,
        visual_feature,
        friction_angle_deg,
        cohesion_kpa,
        stiffness_modulus_kpa,
    };
    SoilCatalog::new(vec![
        spec(0, "bedrock slab", 0.05, 2.0, 0.01, [0.20, 0.30, 0.10, 0.90], 40.0, 25.0, 50_000.0),
        spec(1, "compacted loam", 0.15, 3.0, 0.02, [0.35, 0.50, 1.30, 0.55], 33.0, 10.0, 9_000.0),
        spec(2, "gravel bed", 0.22, 4.0, 0.03, [0.50, 0.40, 2.10, 1.40], 38.0, 2.0, 20_000.0),
        spec(3, "coarse sand", 0.45, 3.0, 0.04, [0.80, 1.20, 1.90, 0.20], 31.0, 0.5, 5_000.0),
        spec(4, "desert sand", 0.62, 10.0, 0.05, [0.95, 1.50, 0.60, 0.10], 28.0, 0.2, 2_500.0),
        spec(5, "highland regolith", 0.35, 5.0, 0.03, [0.55, 0.15, 0.50, 2.00], 36.0, 1.0, 7_000.0),
        spec(6, "mare regolith", 0.50, 4.0, 0.04, [0.10, 0.10, 1.30, 2.75], 34.0, 0.8, 6_000.0),
        spec(7, "fine dust", 0.80, 8.0, 0.06, [0.35, 0.20, 0.15, 3.20], 25.0, 0.4, 1_500.0),
    ])
    .expect("default catalog is valid")
}

/// Spatial layout used when painting soils onto a grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TerrainPattern {
    /// Vertical bands of equal width cycling through the palette.
    Stripes {
        #[serde(default = "default_band_width")]
        band_width_m: f64,
    },
    /// Nearest-seed-point tessellation with `num_seeds` sites.
    VoronoiPatches {
        #[serde(default = "default_num_seeds")]
        num_seeds: usize,
    },
    /// Square tiles alternating through the palette.
    Checkerboard {
        #[serde(default = "default_tile")]
        tile_m: f64,
    },
}

fn default_band_width() -> f64 {
    2.0
}

fn default_num_seeds() -> usize {
    12
}

fn default_tile() -> f64 {
    1.0
}

impl TerrainPattern {
    pub fn stripes() -> Self {
        TerrainPattern::Stripes { band_width_m: 2.0 }
    }

    pub fn voronoi() -> Self {
        TerrainPattern::VoronoiPatches { num_seeds: 12 }
    }

    pub fn checkerboard() -> Self {
        TerrainPattern::Checkerboard { tile_m: 1.0 }
    }
}

/// Row-major raster of soil ids. Row 0 covers `y` in `[0, resolution)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TerrainGrid {
    width_m: f64,
    height_m: f64,
    resolution: f64,
    nx: usize,
    ny: usize,
    cells: Vec<SoilId>,
}

impl TerrainGrid {
    pub fn width_m(&self) -> f64 {
        self.width_m
    }

    pub fn height_m(&self) -> f64 {
        self.height_m
    }

    pub fn resolution(&self) -> f64 {
        self.resolution
    }

    /// Number of columns.
    pub fn nx(&self) -> usize {
        self.nx
    }

    /// Number of rows.
    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn cells(&self) -> &[SoilId] {
        &self.cells
    }

    pub fn cell(&self, col: usize, row: usize) -> SoilId {
        self.cells[row * self.nx + col]
    }

    /// World coordinates of the center of cell (col, row).
    pub fn cell_center(&self, col: usize, row: usize) -> (f64, f64) {
        (
            (col as f64 + 0.5) * self.resolution,
            (row as f64 + 0.5) * self.resolution,
        )
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        x >= 0.0 && x < self.width_m && y >= 0.0 && y < self.height_m
    }

    fn cell_index_of(&self, x: f64, y: f64) -> usize {
        let col = ((x / self.resolution) as usize).min(self.nx - 1);
        let row = ((y / self.resolution) as usize).min(self.ny - 1);
        row * self.nx + col
    }

    /// Soil id of the cell containing (x, y).
    pub fn soil_at(&self, x: f64, y: f64) -> Result<SoilId> {
        if !self.contains(x, y) {
            return Err(Error::OutOfBounds(format!(
                "({x:.3}, {y:.3}) outside {:.1} m x {:.1} m terrain",
                self.width_m, self.height_m
            )));
        }
        Ok(self.cells[self.cell_index_of(x, y)])
    }

    /// Like [`soil_at`](Self::soil_at) but clamps coordinates into bounds,
    /// for lookups of wheel contact points that poke past the edge.
    pub fn soil_at_clamped(&self, x: f64, y: f64) -> SoilId {
        let x = x.clamp(0.0, self.width_m - 1e-9);
        let y = y.clamp(0.0, self.height_m - 1e-9);
        self.cells[self.cell_index_of(x, y)]
    }

    /// Encode the raster as binary PGM; pixel = catalog index of the cell's
    /// soil, maxval = catalog size - 1 (floored at 1, PGM requires maxval >= 1).
    pub fn to_pgm(&self, catalog: &SoilCatalog) -> Result<Vec<u8>> {
        let mut pixels = Vec::with_capacity(self.cells.len());
        for id in &self.cells {
            let idx = catalog.index_of(*id).ok_or_else(|| {
                Error::InvalidArgument(format!("cell soil id {id} not in catalog"))
            })?;
            pixels.push(idx as u8);
        }
        let maxval = (catalog.len().saturating_sub(1)).max(1) as u8;
        Ok(crate::raster::encode_pgm(self.nx, self.ny, maxval, &pixels))
    }
}

fn grid_shape(width_m: f64, height_m: f64, resolution: f64) -> Result<(usize, usize)> {
    if !(width_m > 0.0) || !(height_m > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "terrain dimensions must be positive, got {width_m} x {height_m}"
        )));
    }
    if !(resolution > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "resolution must be positive, got {resolution}"
        )));
    }
    let nx = (width_m / resolution).round() as usize;
    let ny = (height_m / resolution).round() as usize;
    if nx == 0 || ny == 0 {
        return Err(Error::InvalidArgument(
            "resolution larger than terrain extent".into(),
        ));
    }
    // Resolution must tile the extent to within one cell.
    if (nx as f64 * resolution - width_m).abs() > resolution
        || (ny as f64 * resolution - height_m).abs() > resolution
    {
        return Err(Error::InvalidArgument(format!(
            "resolution {resolution} does not divide {width_m} x {height_m} to within one cell"
        )));
    }
    Ok((nx, ny))
}

/// Generate a terrain over the full catalog palette. Deterministic for fixed
/// `(seed, pattern, dims)`.
pub fn generate_terrain(
    seed: u64,
    catalog: &SoilCatalog,
    pattern: TerrainPattern,
    width_m: f64,
    height_m: f64,
    resolution: f64,
) -> Result<TerrainGrid> {
    generate_terrain_with_palette(seed, &catalog.ids(), pattern, width_m, height_m, resolution)
}

/// Generate a terrain restricted to an explicit soil palette (e.g. a
/// two-soil mix or a single-soil map).
pub fn generate_terrain_with_palette(
    seed: u64,
    palette: &[SoilId],
    pattern: TerrainPattern,
    width_m: f64,
    height_m: f64,
    resolution: f64,
) -> Result<TerrainGrid> {
    if palette.is_empty() {
        return Err(Error::InvalidArgument("palette must be non-empty".into()));
    }
    let (nx, ny) = grid_shape(width_m, height_m, resolution)?;
    let n = palette.len();
    let mut cells = Vec::with_capacity(nx * ny);

    match pattern {
        TerrainPattern::Stripes { band_width_m } => {
            if !(band_width_m > 0.0) {
                return Err(Error::InvalidArgument("band_width_m must be positive".into()));
            }
            let band_cells = ((band_width_m / resolution).round() as usize).max(1);
            for _row in 0..ny {
                for col in 0..nx {
                    cells.push(palette[(col / band_cells) % n]);
                }
            }
        }
        TerrainPattern::Checkerboard { tile_m } => {
            if !(tile_m > 0.0) {
                return Err(Error::InvalidArgument("tile_m must be positive".into()));
            }
            let tile_cells = ((tile_m / resolution).round() as usize).max(1);
            for row in 0..ny {
                for col in 0..nx {
                    cells.push(palette[(col / tile_cells + row / tile_cells) % n]);
                }
            }
        }
        TerrainPattern::VoronoiPatches { num_seeds } => {
            if num_seeds == 0 {
                return Err(Error::InvalidArgument("num_seeds must be positive".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let sites: Vec<(f64, f64)> = (0..num_seeds)
                .map(|_| {
                    (
                        rng.random_range(0.0..width_m),
                        rng.random_range(0.0..height_m),
                    )
                })
                .collect();
            // Cycle the palette over the sites, then shuffle the assignment so
            // neighboring sites do not follow catalog order.
            let mut site_soils: Vec<SoilId> =
                (0..num_seeds).map(|i| palette[i % n]).collect();
            site_soils.shuffle(&mut rng);
            for row in 0..ny {
                for col in 0..nx {
                    let cx = (col as f64 + 0.5) * resolution;
                    let cy = (row as f64 + 0.5) * resolution;
                    let nearest = sites
                        .iter()
                        .enumerate()
                        .min_by(|(_, a), (_, b)| {
                            let da = (a.0 - cx).powi(2) + (a.1 - cy).powi(2);
                            let db = (b.0 - cx).powi(2) + (b.1 - cy).powi(2);
                            da.partial_cmp(&db).unwrap()
                        })
                        .map(|(i, _)| i)
                        .unwrap();
                    cells.push(site_soils[nearest]);
                }
            }
        }
    }

    Ok(TerrainGrid {
        width_m,
        height_m,
        resolution,
        nx,
        ny,
        cells,
    })
}

use rand::SeedableRng;
