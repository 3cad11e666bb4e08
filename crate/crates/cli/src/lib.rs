//! Library side of the `corrlab` binary: configuration, specifier parsing,
//! action execution and rendering.

pub mod config;
pub mod error;
pub mod render;
pub mod run;
pub mod spec;

pub use config::{Action, ExperimentConfig, Sampler};
pub use error::CliError;
pub use run::{execute, load_run_file, manifest_path, run};
pub use spec::{parse_function_spec, parse_point, SpecError};
