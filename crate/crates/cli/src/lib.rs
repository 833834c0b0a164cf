//! Configuration-driven runner for the kicked-mixture numerics.
//!
//! A run reads one JSON [`RunConfig`], computes the requested experiment and
//! writes CSV series, JSON spectra, a config echo and finally a manifest with
//! a SHA-256 digest of every file.

pub mod config;
pub mod emit;
pub mod error;
pub mod run;

pub use config::{Collapse, Experiment, RunConfig, TimeGrid};
pub use emit::{series_csv, ManifestEntry, OutputManifest, RunWriter, MANIFEST_NAME};
pub use error::{CliError, FieldError};
pub use run::{run_experiment, CONFIG_ECHO_NAME};
