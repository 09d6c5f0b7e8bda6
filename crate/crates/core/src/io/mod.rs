//! On-disk formats and the command drivers used by the `gqg` binary.
//!
//! - [`config`]: flat `key = value` run configuration with a resolved echo.
//! - [`snapshot`]: binary `GQGS` coefficient files.
//! - [`output`]: diagnostics CSV, curvature JSON and threshold-scan CSV.
//! - [`commands`]: `run`, `mc`, `example` and `threshold-scan`.

pub mod commands;
pub mod config;
pub mod output;
pub mod snapshot;

pub use commands::{
    cmd_example, cmd_mc, cmd_run, cmd_threshold_scan, resolve_config, FieldSpec, McArgs, RunOverrides, RunSummary,
};
pub use config::{InitSpec, RunConfig, TopoSpec};
pub use output::{mc_report_json, DirectorySink};
pub use snapshot::Snapshot;
