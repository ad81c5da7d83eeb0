//! Configuration, datasets and file export.

pub mod config;
pub mod data;
pub mod export;

pub use config::{
    paper_rig, parse_config, FreeSpec, PlacementSpec, PlatformSpec, RigConfig, PAPER_RIG_JSON,
    PAPER_RIG_NAME,
};
pub use data::{
    analyze, baseline_subtract, error_metrics, load_measurements, predict, pressure_grid,
    write_measurements, Analysis, ErrorReport, MeasurementRecord,
};
pub use export::{
    error_report_csv, export_zonotope, sweep_csv, zonotope_csv, zonotope_svg, ExportFormat,
};
