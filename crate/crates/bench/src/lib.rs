//! Benchmark harness for the `pcfr` solvers.
//!
//! Runs (algorithm, seed) grids on a worker pool, evaluates exploitability on
//! a node-touch schedule, and writes per-run and aggregate CSVs. Also derives
//! sync-phase statistics from a run CSV and compares algorithms at a target
//! exploitability.

pub mod aggregate;
pub mod config;
pub mod error;
pub mod matrix;
pub mod phase;
pub mod runs;

pub use aggregate::{aggregate, compare, read_aggregate, write_aggregate, AggregateRow, Comparison};
pub use config::{BenchmarkConfig, EvalSchedule, WORKERS_ENV};
pub use error::{BenchError, Result};
pub use phase::{phase_stats, write_phase_stats, PhaseStats};
pub use runs::{read_run_csv, run_benchmark, run_file_name, run_single, write_run_csv, RunResult};
