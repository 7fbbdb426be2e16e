//! Experiment protocol: dataset generation, benchmark against baselines,
//! calibration, curve export, adaptation to unseen soils, and simulation
//! series.

pub mod adaptation;
pub mod bench;
pub mod curves;
pub mod dataset;
pub mod simulate;

pub use adaptation::{unseen_soil_adaptation, AdaptationConfig, AdaptationReport};
pub use bench::{
    calibration_report, evaluate_mae, fit_pipeline, run_benchmark, run_benchmark_on,
    BenchmarkReport, BenchmarkRun, CalibrationReport, FittedPipeline, MethodVariant, TerrainMae,
    VariantEvaluation,
};
pub use curves::{export_slip_speed_curves, SlipSpeedCurves};
pub use dataset::{
    annotation_for_run, build_run_terrains, generate_dataset, generate_dataset_with,
    records_from_jsonl, records_to_csv, records_to_jsonl, Dataset, DatasetSpec, SplitRole,
    TerrainInfo, TrajectoryRecord,
};
pub use simulate::{simulate_series, SeriesRow, SlipSeries};
