//! Files, experiment orchestration and the `hopdetect` command line on top
//! of `hopdetect-core`.

pub mod config;
pub mod docs;
pub mod error;
pub mod netfile;
pub mod sweep;
pub mod table;

pub use config::ExperimentConfig;
pub use error::{Error, Result};
pub use netfile::NetworkFile;
pub use sweep::run_sweep_parallel;
