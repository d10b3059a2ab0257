//! Config-driven benchmark harness: runs, sweeps, metrics and CSV traces.

mod bench;
mod config;
mod slope;
mod sweep;

pub use bench::{
    classification_error, file_stem, prepare, run_benchmark, run_prepared, tune_eta0,
    write_trace_csv, BenchResult, Metric, Prepared, RunResult, CSV_HEADER,
};
pub use config::{
    parse_kv, ConfigMap, DataSource, EvalSpec, ExperimentConfig, Leading, ScheduleKind,
    ScheduleSpec, TestSource, VectorSpec,
};
pub use slope::{fit_loglog_slope, MIN_SLOPE_POINTS};
pub use sweep::{sensitivity_sweep, write_sweep_csv, SweepAxis, SweepResult};
