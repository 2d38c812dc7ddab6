//! Scenario configs, the batch runner, convergence sweeps and JSON reports.

pub mod config;
pub mod report;
pub mod run;
pub mod sweep;

pub use config::{parse_param, Check, ConfigOverrides, GeneratorSpec, MetricSpec, ScenarioConfig};
pub use report::{CheckSummary, Record, ResidualReport, Summary, Verdict, SCHEMA_VERSION, WITNESS_FLOOR};
pub use run::{generator_seeds, run, sample_points, THREADS_ENV};
pub use sweep::{convergence_sweep, SweepQuantity, SweepReport, SweepStatus, ORDER_BAND};
