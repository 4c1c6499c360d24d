//! Frame ingestion, scene export and experiment runs for the `dsnn` binary.

pub mod error;
pub mod pgm;
pub mod report;
pub mod runner;

pub use error::{CliError, Result};
pub use report::{Model, RunReport, Summary};
pub use runner::{ParamSource, Source};
