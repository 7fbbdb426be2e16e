//! Rover slip estimation testbed.
//!
//! Simulates a differential-drive rover on heterogeneous deformable soils and
//! provides the full estimation pipeline around it: slip measurement, risk
//! banding, Gaussian-basis slip-vs-speed regression, per-class probabilistic
//! slip models trained through a prioritized replay buffer, slip cost map
//! construction, and a benchmark harness comparing the fitted pipeline
//! against a class-agnostic prior.
//!
//! Everything is seeded: the same configuration and seed reproduce the same
//! terrains, trajectories, datasets, and reports byte for byte.

pub mod config;
pub mod costmap;
pub mod error;
pub mod estimator;
pub mod eval;
pub mod raster;
pub mod replay;
pub mod rover;
pub mod segment;
pub mod sliprisk;
pub mod terrain;

pub use error::{Error, Result};

/// Derive an independent sub-seed from a master seed and a salt
/// (splitmix64 finalizer). Lets one run seed fan out into decorrelated
/// streams for terrains, trajectories, and segmentation.
pub fn mix_seed(master: u64, salt: u64) -> u64 {
    let mut z = master ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
