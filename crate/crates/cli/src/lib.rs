//! Command-line front end for the DC proximal solvers: flat `key = value`
//! run configurations, trace CSV emission, and plain-text certificate
//! reports. The numerical work lives in `dcprox-core`; this crate only
//! parses, assembles, executes, and serializes.

pub mod config;
pub mod runner;
pub mod traceio;

use std::path::PathBuf;

/// Run completed: regular termination and every requested certificate passed.
pub const EXIT_OK: i32 = 0;
/// Configuration could not be parsed or validated.
pub const EXIT_CONFIG: i32 = 2;
/// Reading the configuration or writing an output file failed.
pub const EXIT_IO: i32 = 3;
/// The run ended with an infeasible step or an oracle/inner-solve error.
pub const EXIT_RUN: i32 = 4;
/// At least one requested certificate failed.
pub const EXIT_CERT: i32 = 5;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("trace file format error: {0}")]
    TraceFormat(String),

    #[error(transparent)]
    Core(#[from] dcprox_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Core(_) => EXIT_CONFIG,
            CliError::Io { .. } | CliError::TraceFormat(_) => EXIT_IO,
        }
    }
}
