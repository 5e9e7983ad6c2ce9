//! Benchmark, verification and statistics harness for `paircount-core`.

pub mod config;
pub mod error;
pub mod experiments;
pub mod record;
pub mod stats;
pub mod verify;

pub use config::{BenchConfig, Experiment, ExtentPolicy};
pub use error::{CliError, Result};
pub use experiments::{
    run_linear_vs_quadratic, run_locality_sweep, run_realloc_sweep, run_spi_compare, RunOutput,
};
pub use record::{BenchRecord, Outcome};
pub use verify::{run_verify, Level, VerifyReport};
