//! Differential-drive rover simulation with soil-dependent ground-truth slip.
//!
//! Each wheel commands a surface speed `v_ref = wheel_radius * omega`; the
//! soil under that wheel draws a slip realization, the effective speed is
//! `v_ref * (1 - slip)`, and the pose advances by standard differential-drive
//! kinematics. Measured speeds add Gaussian noise emulating visual odometry,
//! so logged slip is the measured quantity, not the planted one.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::segment::ClassLabel;
use crate::sliprisk::slip_ratio;
use crate::terrain::{SoilCatalog, SoilId, TerrainGrid};

/// Commanded wheel-surface speeds below this are treated as "not driving"
/// and produce no slip samples.
const DRIVE_EPS: f64 = 1e-9;

/// Logged slip is kept strictly below 1 even if the measured speed collapses
/// to zero under odometry noise.
const MAX_LOGGED_SLIP: f64 = 0.9999;

/// Physical parameters of the simulated rover.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RoverParams {
    pub wheel_radius: f64,
    pub track_width: f64,
    /// Carried as metadata; the kinematic model is massless.
    pub mass_kg: f64,
    pub max_wheel_speed: f64,
    /// Std of the additive noise on measured body speed (visual odometry).
    pub vo_noise_std: f64,
}

impl Default for RoverParams {
    fn default() -> Self {
        Self {
            wheel_radius: 0.1,
            track_width: 0.3,
            mass_kg: 10.0,
            max_wheel_speed: 3.5,
            vo_noise_std: 0.005,
        }
    }
}

impl RoverParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.wheel_radius > 0.0) || !(self.track_width > 0.0) || !(self.max_wheel_speed > 0.0)
        {
            return Err(Error::InvalidArgument(
                "wheel_radius, track_width and max_wheel_speed must be positive".into(),
            ));
        }
        if self.vo_noise_std < 0.0 {
            return Err(Error::InvalidArgument("vo_noise_std must be non-negative".into()));
        }
        Ok(())
    }
}

/// Planar pose plus simulation time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RoverState {
    pub x: f64,
    pub y: f64,
    /// Heading wrapped to (-pi, pi].
    pub heading: f64,
    pub t: f64,
}

impl RoverState {
    pub fn new(x: f64, y: f64, heading: f64) -> Self {
        Self {
            x,
            y,
            heading: wrap_angle(heading),
            t: 0.0,
        }
    }
}

/// Wrap an angle to (-pi, pi].
pub fn wrap_angle(a: f64) -> f64 {
    let mut a = a % (2.0 * std::f64::consts::PI);
    if a <= -std::f64::consts::PI {
        a += 2.0 * std::f64::consts::PI;
    } else if a > std::f64::consts::PI {
        a -= 2.0 * std::f64::consts::PI;
    }
    a
}

/// Which measurement a slip sample belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WheelSide {
    Left,
    Right,
    /// Mean of the two wheel slips with the body's measured speed.
    BodyMean,
}

/// One in-situ slip measurement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlipSample {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub soil_true: SoilId,
    /// Class label observed by the segmentation front end; defaults to the
    /// true soil until a segmentation map relabels it.
    pub class_observed: ClassLabel,
    /// Commanded wheel-surface speed (m/s), positive for logged samples.
    pub v_ref: f64,
    /// Measured travel speed (m/s).
    pub v_x: f64,
    /// Measured slip in [0, 1).
    pub slip: f64,
    pub wheel: WheelSide,
}

/// Result of advancing the simulation by one step.
#[derive(Debug, Clone)]
pub struct StepOutcome {
    pub state: RoverState,
    pub samples: Vec<SlipSample>,
    /// Set when a wheel command exceeded `max_wheel_speed` and was clamped.
    pub clamped: bool,
}

/// Advance the rover by one integration step of `dt` seconds under wheel
/// speed commands `omega_left` / `omega_right` (rad/s).
///
/// Commands beyond `max_wheel_speed` are clamped and flagged. Wheel contact
/// points falling outside the grid use the nearest edge cell.
pub fn step<R: Rng + ?Sized>(
    params: &RoverParams,
    state: &RoverState,
    omega_left: f64,
    omega_right: f64,
    dt: f64,
    grid: &TerrainGrid,
    catalog: &SoilCatalog,
    rng: &mut R,
) -> Result<StepOutcome> {
    if !(dt > 0.0 && dt <= 0.1) {
        return Err(Error::InvalidArgument(format!(
            "dt must be in (0, 0.1], got {dt}"
        )));
    }
    params.validate()?;

    let max = params.max_wheel_speed;
    let clamped = omega_left.abs() > max || omega_right.abs() > max;
    let omega_left = omega_left.clamp(-max, max);
    let omega_right = omega_right.clamp(-max, max);

    let half_track = 0.5 * params.track_width;
    let (sin_h, cos_h) = state.heading.sin_cos();
    let left_pos = (state.x - sin_h * half_track, state.y + cos_h * half_track);
    let right_pos = (state.x + sin_h * half_track, state.y - cos_h * half_track);

    let soil_left = lookup_soil(grid, catalog, left_pos)?;
    let soil_right = lookup_soil(grid, catalog, right_pos)?;

    let v_ref_left = params.wheel_radius * omega_left;
    let v_ref_right = params.wheel_radius * omega_right;

    // Ground-truth slip applies to the commanded speed magnitude per wheel.
    let slip_left = soil_left.sample_slip(v_ref_left.abs(), rng);
    let slip_right = soil_right.sample_slip(v_ref_right.abs(), rng);
    let v_eff_left = v_ref_left * (1.0 - slip_left);
    let v_eff_right = v_ref_right * (1.0 - slip_right);

    let v_body = 0.5 * (v_eff_left + v_eff_right);
    let omega_body = (v_eff_right - v_eff_left) / params.track_width;

    let new_state = RoverState {
        x: state.x + v_body * cos_h * dt,
        y: state.y + v_body * sin_h * dt,
        heading: wrap_angle(state.heading + omega_body * dt),
        t: state.t + dt,
    };

    // Measurement noise draws happen unconditionally so the rng stream does
    // not depend on which samples end up logged.
    let z_left: f64 = StandardNormal.sample(rng);
    let z_right: f64 = StandardNormal.sample(rng);
    let z_body: f64 = StandardNormal.sample(rng);

    let mut samples = Vec::new();
    let v_ref_body = 0.5 * (v_ref_left + v_ref_right);
    if v_ref_body > DRIVE_EPS {
        let mut wheel_slips = [f64::NAN; 2];
        let wheels = [
            (WheelSide::Left, v_ref_left, v_eff_left, z_left, left_pos, soil_left.id),
            (WheelSide::Right, v_ref_right, v_eff_right, z_right, right_pos, soil_right.id),
        ];
        for (i, (side, v_ref, v_eff, z, pos, soil_id)) in wheels.into_iter().enumerate() {
            if v_ref <= DRIVE_EPS {
                continue;
            }
            let v_meas = (v_eff + z * params.vo_noise_std).max(0.0);
            let slip = slip_ratio(v_meas, v_ref)?;
            wheel_slips[i] = slip;
            // Only positive (driving) slip is kept; braking samples are
            // clipped out of the logs.
            if slip >= 0.0 {
                samples.push(SlipSample {
                    t: state.t,
                    x: pos.0,
                    y: pos.1,
                    soil_true: soil_id,
                    class_observed: ClassLabel::Soil(soil_id),
                    v_ref,
                    v_x: v_meas,
                    slip: slip.min(MAX_LOGGED_SLIP),
                    wheel: side,
                });
            }
        }
        if wheel_slips.iter().all(|s| s.is_finite()) {
            let body_slip = 0.5 * (wheel_slips[0] + wheel_slips[1]);
            if body_slip >= 0.0 {
                let soil_body = lookup_soil(grid, catalog, (state.x, state.y))?;
                samples.push(SlipSample {
                    t: state.t,
                    x: state.x,
                    y: state.y,
                    soil_true: soil_body.id,
                    class_observed: ClassLabel::Soil(soil_body.id),
                    v_ref: v_ref_body,
                    v_x: (v_body + z_body * params.vo_noise_std).max(0.0),
                    slip: body_slip.min(MAX_LOGGED_SLIP),
                    wheel: WheelSide::BodyMean,
                });
            }
        }
    }

    Ok(StepOutcome {
        state: new_state,
        samples,
        clamped,
    })
}

fn lookup_soil<'a>(
    grid: &TerrainGrid,
    catalog: &'a SoilCatalog,
    pos: (f64, f64),
) -> Result<&'a crate::terrain::SoilSpec> {
    let id = grid.soil_at_clamped(pos.0, pos.1);
    catalog.get(id).ok_or_else(|| {
        Error::InvalidArgument(format!("terrain soil id {id} missing from catalog"))
    })
}

/// PD gains for the heading controller.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PdGains {
    pub kp: f64,
    pub kd: f64,
}

impl Default for PdGains {
    fn default() -> Self {
        Self { kp: 2.0, kd: 0.3 }
    }
}

/// Scenario parameters for a path-following run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    /// Constant commanded body speed (m/s).
    pub v_command: f64,
    pub duration_s: f64,
    /// Integration step (s).
    pub dt: f64,
    /// Slip samples are logged at this period (s).
    pub log_period: f64,
    /// A waypoint counts as reached within this distance (m).
    pub waypoint_tolerance_m: f64,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            v_command: 0.3,
            duration_s: 30.0,
            dt: 0.02,
            log_period: 0.1,
            waypoint_tolerance_m: 0.2,
        }
    }
}

/// A completed scenario: states at the logging period plus slip samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub states: Vec<RoverState>,
    pub samples: Vec<SlipSample>,
    pub seed: u64,
    pub v_command: f64,
    /// Number of steps where wheel commands hit the speed limit.
    pub clamp_events: usize,
}

/// Follow a waypoint path with a PD heading controller and constant forward
/// command. Deterministic for a fixed seed; terminates at `duration_s` or
/// when the final waypoint is within tolerance.
pub fn follow_path(
    waypoints: &[(f64, f64)],
    params: &RoverParams,
    gains: &PdGains,
    scenario: &ScenarioConfig,
    grid: &TerrainGrid,
    catalog: &SoilCatalog,
    seed: u64,
) -> Result<Trajectory> {
    if waypoints.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "need at least 2 waypoints, got {}",
            waypoints.len()
        )));
    }
    for &(x, y) in waypoints {
        if !grid.contains(x, y) {
            return Err(Error::InvalidArgument(format!(
                "waypoint ({x:.2}, {y:.2}) outside terrain bounds"
            )));
        }
    }
    if !(scenario.v_command > 0.0) {
        return Err(Error::InvalidArgument("v_command must be positive".into()));
    }
    params.validate()?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let start = waypoints[0];
    let initial_heading = (waypoints[1].1 - start.1).atan2(waypoints[1].0 - start.0);
    let mut state = RoverState::new(start.0, start.1, initial_heading);

    let log_every = (scenario.log_period / scenario.dt).round().max(1.0) as usize;
    let n_steps = (scenario.duration_s / scenario.dt).round() as usize;

    let mut trajectory = Trajectory {
        states: vec![state],
        samples: Vec::new(),
        seed,
        v_command: scenario.v_command,
        clamp_events: 0,
    };

    let mut target_idx = 1usize;
    let mut prev_err = 0.0;
    for step_idx in 0..n_steps {
        // Advance the target waypoint while it is already reached.
        while target_idx + 1 < waypoints.len() {
            let (tx, ty) = waypoints[target_idx];
            if (state.x - tx).hypot(state.y - ty) <= scenario.waypoint_tolerance_m {
                target_idx += 1;
            } else {
                break;
            }
        }
        let (tx, ty) = waypoints[target_idx];
        let dist_to_final = {
            let (fx, fy) = *waypoints.last().unwrap();
            (state.x - fx).hypot(state.y - fy)
        };
        if target_idx == waypoints.len() - 1 && dist_to_final <= scenario.waypoint_tolerance_m {
            break;
        }

        let heading_err = wrap_angle((ty - state.y).atan2(tx - state.x) - state.heading);
        let omega_cmd = gains.kp * heading_err + gains.kd * (heading_err - prev_err) / scenario.dt;
        prev_err = heading_err;

        // Allocate rotation first; translation takes what headroom is left so
        // steering authority survives saturation.
        let max = params.max_wheel_speed;
        let turn = (omega_cmd * params.track_width / (2.0 * params.wheel_radius))
            .clamp(-max, max);
        let headroom = max - turn.abs();
        let forward = (scenario.v_command / params.wheel_radius).clamp(0.0, headroom);
        let outcome = step(
            params,
            &state,
            forward - turn,
            forward + turn,
            scenario.dt,
            grid,
            catalog,
            &mut rng,
        )?;
        if outcome.clamped {
            trajectory.clamp_events += 1;
        }
        if step_idx % log_every == 0 {
            trajectory.samples.extend(outcome.samples);
        }
        state = outcome.state;
        if (step_idx + 1) % log_every == 0 {
            trajectory.states.push(state);
        }
    }

    Ok(trajectory)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terrain::{
        default_catalog, generate_terrain, generate_terrain_with_palette, SoilCatalog, SoilSpec,
        TerrainPattern,
    };
    use approx::assert_abs_diff_eq;

    fn uniform_soil(s_max: f64, rise_rate: f64, noise_std: f64) -> (SoilCatalog, TerrainGrid) {
        let soil = SoilSpec {
            id: SoilId(0),
            name: "test soil".into(),
            s_max,
            rise_rate,
            noise_std,
            visual_feature: [0.0; 4],
            friction_angle_deg: 30.0,
            cohesion_kpa: 1.0,
            stiffness_modulus_kpa: 1000.0,
        };
        let catalog = SoilCatalog::new(vec![soil]).unwrap();
        let grid = generate_terrain_with_palette(
            0,
            &[SoilId(0)],
            TerrainPattern::stripes(),
            20.0,
            20.0,
            0.1,
        )
        .unwrap();
        (catalog, grid)
    }

    fn quiet_params() -> RoverParams {
        RoverParams {
            vo_noise_std: 0.0,
            ..RoverParams::default()
        }
    }

    #[test]
    fn straight_advance_on_zero_slip_soil() {
        let (catalog, grid) = uniform_soil(0.0, 1.0, 0.0);
        let params = quiet_params();
        let state = RoverState::new(10.0, 10.0, 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let out = step(&params, &state, 3.0, 3.0, 0.1, &grid, &catalog, &mut rng).unwrap();
        assert_abs_diff_eq!(out.state.x, 10.03, epsilon = 1e-12);
        assert_abs_diff_eq!(out.state.y, 10.0, epsilon = 1e-12);
        assert_eq!(out.state.heading, 0.0);
        assert!(!out.clamped);
        assert_eq!(out.samples.len(), 3);
        for sample in &out.samples {
            assert_abs_diff_eq!(sample.slip, 0.0, epsilon = 1e-12);
            assert_abs_diff_eq!(sample.v_ref, 0.3, epsilon = 1e-12);
        }
    }

    #[test]
    fn spin_in_place_logs_nothing_and_stays_put() {
        let (catalog, grid) = uniform_soil(0.0, 1.0, 0.0);
        let params = quiet_params();
        let state = RoverState::new(10.0, 10.0, 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let out = step(&params, &state, -2.0, 2.0, 0.1, &grid, &catalog, &mut rng).unwrap();
        assert_abs_diff_eq!(out.state.x, 10.0, epsilon = 1e-12);
        assert_abs_diff_eq!(out.state.y, 10.0, epsilon = 1e-12);
        assert!(out.state.heading > 0.0);
        assert!(out.samples.is_empty());
    }

    #[test]
    fn saturated_slip_halves_progress() {
        // rise_rate large enough that expected slip is the asymptote.
        let (catalog, grid) = uniform_soil(0.5, 1e9, 0.0);
        let params = quiet_params();
        let state = RoverState::new(10.0, 10.0, 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let out = step(&params, &state, 3.0, 3.0, 0.1, &grid, &catalog, &mut rng).unwrap();
        assert_abs_diff_eq!(out.state.x - 10.0, 0.015, epsilon = 1e-12);
        for sample in &out.samples {
            assert_abs_diff_eq!(sample.slip, 0.5, epsilon = 1e-12);
        }
    }

    #[test]
    fn noise_free_slip_matches_planted_curve_exactly() {
        let (catalog, grid) = uniform_soil(0.4, 3.0, 0.0);
        let params = quiet_params();
        let soil = &catalog.soils()[0];
        let state = RoverState::new(10.0, 10.0, 0.3);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let out = step(&params, &state, 2.0, 2.0, 0.05, &grid, &catalog, &mut rng).unwrap();
        let expected = soil.expected_slip(0.2);
        for sample in &out.samples {
            assert_abs_diff_eq!(sample.slip, expected, epsilon = 1e-12);
        }
    }

    #[test]
    fn overspeed_command_is_clamped_and_flagged() {
        let (catalog, grid) = uniform_soil(0.0, 1.0, 0.0);
        let params = quiet_params();
        let state = RoverState::new(10.0, 10.0, 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let out = step(&params, &state, 10.0, 10.0, 0.1, &grid, &catalog, &mut rng).unwrap();
        assert!(out.clamped);
        // Clamped to 3.5 rad/s -> 0.35 m/s -> 0.035 m.
        assert_abs_diff_eq!(out.state.x, 10.035, epsilon = 1e-12);
    }

    #[test]
    fn displacement_bounded_by_wheel_limit() {
        let catalog = default_catalog();
        let grid =
            generate_terrain(3, &catalog, TerrainPattern::voronoi(), 20.0, 20.0, 0.1).unwrap();
        let params = RoverParams::default();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut state = RoverState::new(10.0, 10.0, 0.5);
        let bound = params.wheel_radius * params.max_wheel_speed * 0.02 + 1e-12;
        for _ in 0..500 {
            let wl = rng.random_range(-4.0..4.0);
            let wr = rng.random_range(-4.0..4.0);
            let out = step(&params, &state, wl, wr, 0.02, &grid, &catalog, &mut rng).unwrap();
            let d = (out.state.x - state.x).hypot(out.state.y - state.y);
            assert!(d <= bound, "step displaced {d} > {bound}");
            for sample in &out.samples {
                assert!(sample.slip >= 0.0 && sample.slip < 1.0);
                assert!(sample.v_ref > 0.0);
            }
            state = out.state;
        }
    }

    #[test]
    fn invalid_dt_rejected() {
        let (catalog, grid) = uniform_soil(0.0, 1.0, 0.0);
        let params = quiet_params();
        let state = RoverState::new(1.0, 1.0, 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for dt in [0.0, -0.01, 0.2] {
            assert!(matches!(
                step(&params, &state, 1.0, 1.0, dt, &grid, &catalog, &mut rng),
                Err(Error::InvalidArgument(_))
            ));
        }
    }

    #[test]
    fn straight_path_reaches_goal_on_zero_slip_soil() {
        let (catalog, grid) = uniform_soil(0.0, 1.0, 0.0);
        let params = quiet_params();
        let scenario = ScenarioConfig {
            v_command: 0.3,
            duration_s: 30.0,
            ..ScenarioConfig::default()
        };
        let waypoints = [(2.0, 10.0), (7.0, 10.0)];
        let traj = follow_path(
            &waypoints,
            &params,
            &PdGains::default(),
            &scenario,
            &grid,
            &catalog,
            1,
        )
        .unwrap();
        let last = traj.states.last().unwrap();
        let dist = (last.x - 7.0).hypot(last.y - 10.0);
        assert!(dist <= 0.2, "finished {dist:.3} m from goal");
    }

    #[test]
    fn follow_path_is_deterministic() {
        let catalog = default_catalog();
        let grid =
            generate_terrain(9, &catalog, TerrainPattern::voronoi(), 20.0, 20.0, 0.1).unwrap();
        let scenario = ScenarioConfig::default();
        let waypoints = [(2.0, 2.0), (17.0, 4.0), (15.0, 16.0), (3.0, 17.0)];
        let a = follow_path(
            &waypoints,
            &RoverParams::default(),
            &PdGains::default(),
            &scenario,
            &grid,
            &catalog,
            77,
        )
        .unwrap();
        let b = follow_path(
            &waypoints,
            &RoverParams::default(),
            &PdGains::default(),
            &scenario,
            &grid,
            &catalog,
            77,
        )
        .unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn waypoint_outside_grid_rejected() {
        let (catalog, grid) = uniform_soil(0.0, 1.0, 0.0);
        let waypoints = [(2.0, 2.0), (25.0, 2.0)];
        assert!(matches!(
            follow_path(
                &waypoints,
                &RoverParams::default(),
                &PdGains::default(),
                &ScenarioConfig::default(),
                &grid,
                &catalog,
                0,
            ),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn crossing_into_high_slip_soil_raises_logged_slip() {
        // Left half low-slip, right half high-slip, straight eastward path.
        let soils = vec![
            SoilSpec {
                id: SoilId(0),
                name: "firm".into(),
                s_max: 0.05,
                rise_rate: 5.0,
                noise_std: 0.005,
                visual_feature: [0.0; 4],
                friction_angle_deg: 35.0,
                cohesion_kpa: 5.0,
                stiffness_modulus_kpa: 10_000.0,
            },
            SoilSpec {
                id: SoilId(1),
                name: "loose".into(),
                s_max: 0.6,
                rise_rate: 8.0,
                noise_std: 0.005,
                visual_feature: [1.0; 4],
                friction_angle_deg: 28.0,
                cohesion_kpa: 0.3,
                stiffness_modulus_kpa: 2_000.0,
            },
        ];
        let catalog = SoilCatalog::new(soils).unwrap();
        let grid = generate_terrain(
            0,
            &catalog,
            TerrainPattern::Stripes { band_width_m: 10.0 },
            20.0,
            20.0,
            0.1,
        )
        .unwrap();
        let scenario = ScenarioConfig {
            v_command: 0.3,
            duration_s: 30.0,
            ..ScenarioConfig::default()
        };
        let traj = follow_path(
            &[(2.0, 10.0), (18.0, 10.0)],
            &RoverParams::default(),
            &PdGains::default(),
            &scenario,
            &grid,
            &catalog,
            3,
        )
        .unwrap();
        let slips: Vec<f64> = traj
            .samples
            .iter()
            .filter(|s| s.wheel == WheelSide::BodyMean)
            .map(|s| s.slip)
            .collect();
        assert!(slips.len() > 20);
        let half = slips.len() / 2;
        let first: f64 = slips[..half].iter().sum::<f64>() / half as f64;
        let second: f64 = slips[half..].iter().sum::<f64>() / (slips.len() - half) as f64;
        assert!(
            second > first,
            "expected slip to rise after the stripe boundary: {first:.3} vs {second:.3}"
        );
    }
}
