//! Instance files, generators, pipelines and plot export for the
//! `bicombing-lab` command.

pub mod error;
pub mod generate;
pub mod instance;
pub mod plot;
pub mod run;
pub mod sample;

pub use error::{LabError, LabResult};
pub use generate::{generate, GenOptions, Kind};
pub use instance::{ExtremalRule, InstanceFile, NetSource, Params};
pub use run::{apply_overrides, run, Pipeline, Report};
