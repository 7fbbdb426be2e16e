//! Dataset generation: seeded trajectories over heterogeneous terrains with
//! a by-trajectory train/test split.
//!
//! Training trajectories run on six mixed-pattern terrains; test trajectories
//! run on five held-out terrains (stripes, patches, checkerboard, a two-soil
//! mix of the unannotated soils, and a single-soil map of the most
//! desert-sand-like soil). Trajectories fill the train bucket first, then the
//! test bucket; the final trajectory of a bucket is truncated to land exactly
//! on the target count, so no trajectory ever straddles the split.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mix_seed;
use crate::rover::{
    follow_path, PdGains, RoverParams, ScenarioConfig, SlipSample, WheelSide,
};
use crate::segment::AnnotationSet;
use crate::terrain::{
    generate_terrain, generate_terrain_with_palette, SoilCatalog, SoilId, TerrainGrid,
    TerrainPattern,
};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SALT_ANNOTATION: u64 = 0xA110;
const SALT_TRAIN_TERRAIN: u64 = 0x7E00;
const SALT_TEST_TERRAIN: u64 = 0x7E50;
const SALT_TRAJECTORY: u64 = 0x11A0_0000;

/// Protocol parameters for one dataset run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DatasetSpec {
    /// Trajectory budget; generation fails if the targets cannot be met.
    pub n_trajectories: usize,
    pub width_m: f64,
    pub height_m: f64,
    pub resolution: f64,
    /// Total sample target across both splits.
    pub total_samples: usize,
    pub train_fraction: f64,
    /// Commanded body speeds are drawn uniformly from this range, one per
    /// trajectory. The upper end stays below wheel saturation
    /// (wheel_radius * max_wheel_speed = 0.35 m/s by default).
    pub speed_min: f64,
    pub speed_max: f64,
    pub duration_s: f64,
    /// Fraction of catalog soils carrying annotations.
    pub annotated_fraction: f64,
}

impl Default for DatasetSpec {
    fn default() -> Self {
        Self {
            n_trajectories: 24,
            width_m: 20.0,
            height_m: 20.0,
            resolution: 0.1,
            total_samples: 10_080,
            train_fraction: 0.8,
            speed_min: 0.1,
            speed_max: 0.33,
            duration_s: 30.0,
            annotated_fraction: 0.7,
        }
    }
}

impl DatasetSpec {
    pub fn train_target(&self) -> usize {
        (self.total_samples as f64 * self.train_fraction).round() as usize
    }

    pub fn test_target(&self) -> usize {
        self.total_samples - self.train_target()
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_trajectories < 2 {
            return Err(Error::InvalidArgument("need at least 2 trajectories".into()));
        }
        if self.total_samples == 0 {
            return Err(Error::InvalidArgument("total_samples must be positive".into()));
        }
        if !(0.0 < self.train_fraction && self.train_fraction < 1.0) {
            return Err(Error::InvalidArgument("train_fraction must be in (0, 1)".into()));
        }
        if !(self.speed_min > 0.0 && self.speed_max >= self.speed_min) {
            return Err(Error::InvalidArgument("invalid speed range".into()));
        }
        if !(self.duration_s > 0.0) {
            return Err(Error::InvalidArgument("duration_s must be positive".into()));
        }
        if !(0.0..=1.0).contains(&self.annotated_fraction) {
            return Err(Error::InvalidArgument(
                "annotated_fraction must be in [0, 1]".into(),
            ));
        }
        Ok(())
    }
}

/// Which side of the split a trajectory feeds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitRole {
    Train,
    Test,
}

/// One generated terrain with its provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TerrainInfo {
    pub terrain_id: u32,
    pub name: String,
    pub role: SplitRole,
    pub pattern: TerrainPattern,
    pub seed: u64,
    pub grid: TerrainGrid,
}

/// One trajectory's kept samples plus its provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRecord {
    pub trajectory_id: u32,
    pub terrain_id: u32,
    pub role: SplitRole,
    pub seed: u64,
    pub v_command: f64,
    pub samples: Vec<SlipSample>,
}

/// A complete generated dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    pub spec: DatasetSpec,
    pub master_seed: u64,
    pub annotation: AnnotationSet,
    pub terrains: Vec<TerrainInfo>,
    pub train: Vec<TrajectoryRecord>,
    pub test: Vec<TrajectoryRecord>,
}

impl Dataset {
    pub fn train_count(&self) -> usize {
        self.train.iter().map(|r| r.samples.len()).sum()
    }

    pub fn test_count(&self) -> usize {
        self.test.iter().map(|r| r.samples.len()).sum()
    }

    pub fn terrain(&self, terrain_id: u32) -> Option<&TerrainInfo> {
        self.terrains.iter().find(|t| t.terrain_id == terrain_id)
    }

    pub fn test_terrains(&self) -> impl Iterator<Item = &TerrainInfo> {
        self.terrains.iter().filter(|t| t.role == SplitRole::Test)
    }
}

/// Flat export row: one sample per line with its trajectory provenance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SampleRow<'a> {
    pub trajectory: u32,
    pub terrain: u32,
    #[serde(flatten)]
    pub sample: std::borrow::Cow<'a, SlipSample>,
}

/// Serialize records as JSON Lines, one sample per line.
pub fn records_to_jsonl(records: &[TrajectoryRecord]) -> Result<String> {
    let mut out = String::new();
    for record in records {
        for sample in &record.samples {
            let row = SampleRow {
                trajectory: record.trajectory_id,
                terrain: record.terrain_id,
                sample: std::borrow::Cow::Borrowed(sample),
            };
            out.push_str(&serde_json::to_string(&row)?);
            out.push('\n');
        }
    }
    Ok(out)
}

/// Parse records back from JSON Lines, regrouping by trajectory id.
pub fn records_from_jsonl(text: &str, role: SplitRole) -> Result<Vec<TrajectoryRecord>> {
    let mut records: Vec<TrajectoryRecord> = Vec::new();
    for line in text.lines().filter(|l| !l.trim().is_empty()) {
        let row: SampleRow = serde_json::from_str(line)?;
        match records.last_mut() {
            Some(last) if last.trajectory_id == row.trajectory => {
                last.samples.push(row.sample.into_owned());
            }
            _ => records.push(TrajectoryRecord {
                trajectory_id: row.trajectory,
                terrain_id: row.terrain,
                role,
                seed: 0,
                v_command: row.sample.v_ref,
                samples: vec![row.sample.into_owned()],
            }),
        }
    }
    Ok(records)
}

/// Flat CSV export of the same rows.
pub fn records_to_csv(records: &[TrajectoryRecord]) -> Result<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record([
        "trajectory",
        "terrain",
        "t",
        "x",
        "y",
        "soil_true",
        "class_observed",
        "v_ref",
        "v_x",
        "slip",
        "wheel",
    ])?;
    for record in records {
        for s in &record.samples {
            let wheel = match s.wheel {
                WheelSide::Left => "left",
                WheelSide::Right => "right",
                WheelSide::BodyMean => "body_mean",
            };
            writer.write_record([
                record.trajectory_id.to_string(),
                record.terrain_id.to_string(),
                format!("{}", s.t),
                format!("{}", s.x),
                format!("{}", s.y),
                s.soil_true.to_string(),
                s.class_observed.to_string(),
                format!("{}", s.v_ref),
                format!("{}", s.v_x),
                format!("{}", s.slip),
                wheel.to_string(),
            ])?;
        }
    }
    let bytes = writer.into_inner().map_err(|e| Error::Config(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Config(e.to_string()))
}

/// The run's annotation set, derived from the master seed.
pub fn annotation_for_run(
    catalog: &SoilCatalog,
    fraction: f64,
    master_seed: u64,
) -> Result<AnnotationSet> {
    AnnotationSet::from_seed(catalog, fraction, mix_seed(master_seed, SALT_ANNOTATION))
}

/// The soil whose expected slip at 0.4 m/s is closest to 0.6 (the
/// soft-sand analog used for the single-soil test terrain).
pub fn desert_like_soil(catalog: &SoilCatalog) -> SoilId {
    catalog
        .soils()
        .iter()
        .min_by(|a, b| {
            let da = (a.expected_slip(0.4) - 0.6).abs();
            let db = (b.expected_slip(0.4) - 0.6).abs();
            da.partial_cmp(&db).unwrap()
        })
        .map(|s| s.id)
        .expect("catalog non-empty")
}

/// Build the six training terrains and five held-out test terrains.
pub fn build_run_terrains(
    spec: &DatasetSpec,
    catalog: &SoilCatalog,
    annotation: &AnnotationSet,
    master_seed: u64,
) -> Result<Vec<TerrainInfo>> {
    let mut terrains = Vec::new();
    let train_patterns = [
        TerrainPattern::stripes(),
        TerrainPattern::voronoi(),
        TerrainPattern::checkerboard(),
        TerrainPattern::voronoi(),
        TerrainPattern::Stripes { band_width_m: 3.0 },
        TerrainPattern::VoronoiPatches { num_seeds: 16 },
    ];
    for (i, pattern) in train_patterns.iter().enumerate() {
        let seed = mix_seed(master_seed, SALT_TRAIN_TERRAIN + i as u64);
        terrains.push(TerrainInfo {
            terrain_id: i as u32,
            name: format!("train-{i}"),
            role: SplitRole::Train,
            pattern: *pattern,
            seed,
            grid: generate_terrain(
                seed,
                catalog,
                *pattern,
                spec.width_m,
                spec.height_m,
                spec.resolution,
            )?,
        });
    }

    // Two soils outside the annotation set form the unseen-mix terrain; fall
    // back to the last catalog soils if the annotation covers everything.
    let mut unseen = annotation.unannotated(catalog);
    if unseen.len() < 2 {
        let mut ids = catalog.ids();
        ids.reverse();
        for id in ids {
            if !unseen.contains(&id) {
                unseen.push(id);
            }
            if unseen.len() >= 2 {
                break;
            }
        }
    }
    let desert = desert_like_soil(catalog);

    let test_layouts: [(&str, TerrainPattern, Vec<SoilId>); 5] = [
        ("test-stripes", TerrainPattern::stripes(), catalog.ids()),
        ("test-patches", TerrainPattern::voronoi(), catalog.ids()),
        ("test-checker", TerrainPattern::checkerboard(), catalog.ids()),
        (
            "test-unseen-mix",
            TerrainPattern::Stripes { band_width_m: 4.0 },
            unseen[..2].to_vec(),
        ),
        ("test-desert", TerrainPattern::stripes(), vec![desert]),
    ];
    for (i, (name, pattern, palette)) in test_layouts.into_iter().enumerate() {
        let seed = mix_seed(master_seed, SALT_TEST_TERRAIN + i as u64);
        terrains.push(TerrainInfo {
            terrain_id: (train_patterns.len() + i) as u32,
            name: name.to_string(),
            role: SplitRole::Test,
            pattern,
            seed,
            grid: generate_terrain_with_palette(
                seed,
                &palette,
                pattern,
                spec.width_m,
                spec.height_m,
                spec.resolution,
            )?,
        });
    }
    Ok(terrains)
}

/// Draw a waypoint path long enough that the rover keeps driving for the
/// whole scenario: a random start plus five legs of at least 5 m each.
pub fn random_waypoints<R: Rng + ?Sized>(
    rng: &mut R,
    width_m: f64,
    height_m: f64,
) -> Vec<(f64, f64)> {
    let margin = 1.5_f64.min(width_m / 4.0).min(height_m / 4.0);
    let draw = |rng: &mut R| {
        (
            rng.random_range(margin..width_m - margin),
            rng.random_range(margin..height_m - margin),
        )
    };
    let mut waypoints = vec![draw(rng)];
    let min_leg = 5.0_f64.min((width_m - 2.0 * margin) * 0.6);
    for _ in 0..5 {
        let prev = *waypoints.last().unwrap();
        let mut next = draw(rng);
        for _ in 0..200 {
            if (next.0 - prev.0).hypot(next.1 - prev.1) >= min_leg {
                break;
            }
            next = draw(rng);
        }
        waypoints.push(next);
    }
    waypoints
}

fn run_trajectory(
    spec: &DatasetSpec,
    terrain: &TerrainInfo,
    catalog: &SoilCatalog,
    params: &RoverParams,
    gains: &PdGains,
    trajectory_seed: u64,
) -> Result<(f64, Vec<SlipSample>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(trajectory_seed);
    let v_command = rng.random_range(spec.speed_min..=spec.speed_max);
    let waypoints = random_waypoints(&mut rng, spec.width_m, spec.height_m);
    let scenario = ScenarioConfig {
        v_command,
        duration_s: spec.duration_s,
        ..ScenarioConfig::default()
    };
    let trajectory = follow_path(
        &waypoints,
        params,
        gains,
        &scenario,
        &terrain.grid,
        catalog,
        trajectory_seed,
    )?;
    // The regression dataset keeps per-wheel measurements; body-mean samples
    // are for display series.
    let samples: Vec<SlipSample> = trajectory
        .samples
        .into_iter()
        .filter(|s| s.wheel != WheelSide::BodyMean)
        .collect();
    Ok((v_command, samples))
}

/// Generate the seeded train/test dataset. Deterministic per seed; fails
/// with a budget error if `n_trajectories` cannot reach the sample targets.
pub fn generate_dataset(
    spec: &DatasetSpec,
    catalog: &SoilCatalog,
    master_seed: u64,
) -> Result<Dataset> {
    generate_dataset_with(spec, catalog, &RoverParams::default(), &PdGains::default(), master_seed)
}

/// [`generate_dataset`] with explicit rover parameters and controller gains.
pub fn generate_dataset_with(
    spec: &DatasetSpec,
    catalog: &SoilCatalog,
    params: &RoverParams,
    gains: &PdGains,
    master_seed: u64,
) -> Result<Dataset> {
    spec.validate()?;
    let annotation = annotation_for_run(catalog, spec.annotated_fraction, master_seed)?;
    let terrains = build_run_terrains(spec, catalog, &annotation, master_seed)?;
    let train_terrains: Vec<&TerrainInfo> =
        terrains.iter().filter(|t| t.role == SplitRole::Train).collect();
    let test_terrains: Vec<&TerrainInfo> =
        terrains.iter().filter(|t| t.role == SplitRole::Test).collect();

    let train_target = spec.train_target();
    let test_target = spec.test_target();

    let mut train: Vec<TrajectoryRecord> = Vec::new();
    let mut test: Vec<TrajectoryRecord> = Vec::new();
    let mut train_count = 0usize;
    let mut test_count = 0usize;
    let mut train_idx = 0usize;
    let mut test_idx = 0usize;
    let mut test_cap: Option<usize> = None;

    for trajectory_id in 0..spec.n_trajectories as u32 {
        let (role, terrain, cap) = if train_count < train_target {
            let terrain = train_terrains[train_idx % train_terrains.len()];
            train_idx += 1;
            (SplitRole::Train, terrain, train_target - train_count)
        } else if test_count < test_target {
            // Cap per-trajectory test yield so the held-out terrains share
            // the test budget, as far as the trajectory budget allows.
            let cap_base = *test_cap.get_or_insert_with(|| {
                let remaining = spec.n_trajectories - trajectory_id as usize;
                let spread = remaining.min(test_terrains.len()).max(1);
                test_target.div_ceil(spread)
            });
            let terrain = test_terrains[test_idx % test_terrains.len()];
            test_idx += 1;
            (SplitRole::Test, terrain, cap_base.min(test_target - test_count))
        } else {
            break;
        };
        let trajectory_seed = mix_seed(master_seed, SALT_TRAJECTORY + trajectory_id as u64);
        let (v_command, mut samples) =
            run_trajectory(spec, terrain, catalog, params, gains, trajectory_seed)?;
        samples.truncate(cap);
        let record = TrajectoryRecord {
            trajectory_id,
            terrain_id: terrain.terrain_id,
            role,
            seed: trajectory_seed,
            v_command,
            samples,
        };
        match role {
            SplitRole::Train => {
                train_count += record.samples.len();
                train.push(record);
            }
            SplitRole::Test => {
                test_count += record.samples.len();
                test.push(record);
            }
        }
    }

    if train_count < train_target || test_count < test_target {
        return Err(Error::BudgetExceeded(format!(
            "{} trajectories yielded {train_count}/{train_target} train and \
             {test_count}/{test_target} test samples",
            spec.n_trajectories
        )));
    }

    Ok(Dataset {
        spec: *spec,
        master_seed,
        annotation,
        terrains,
        train,
        test,
    })
}
