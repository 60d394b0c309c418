//! Verification batch runner: configuration, suites, reports and the
//! convergence study behind the `emq` binary.

#![allow(clippy::needless_range_loop)]

pub mod config;
pub mod converge;
pub mod report;
pub mod suites;

use std::path::{Path, PathBuf};

use thiserror::Error;

pub use config::{RunConfig, Suite};
pub use converge::{run_converge, ConvergeRow, CSV_HEADER};
pub use report::{Check, Report, SuiteReport};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

pub const REPORT_JSON: &str = "report.json";
pub const REPORT_TEXT: &str = "report.txt";
pub const CONVERGE_CSV: &str = "converge.csv";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("invalid parameters: {0}")]
    Core(#[from] emq_core::Error),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Core(_) => EXIT_CONFIG,
            CliError::Io { .. } => EXIT_FAIL,
        }
    }
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|source| CliError::Io {
        path: dir.to_path_buf(),
        source,
    })
}

/// Runs the selected suites in order without touching the filesystem.
pub fn verify(config: &RunConfig) -> Result<Report, CliError> {
    config.validate()?;
    let mut suites = Vec::new();
    for &suite in &config.suites {
        suites.push(suites::run_suite(suite, config)?);
    }
    Ok(Report::new(config.clone(), suites))
}

/// [`verify`] plus `report.json` and `report.txt` in `config.out`.
pub fn run_verify(config: &RunConfig) -> Result<Report, CliError> {
    let report = verify(config)?;
    ensure_dir(&config.out)?;
    write(&config.out.join(REPORT_JSON), &report.to_json())?;
    write(&config.out.join(REPORT_TEXT), &report.to_text())?;
    Ok(report)
}

/// Convergence table written to `config.out/converge.csv`; returns the
/// rows and the derived checks.
pub fn run_converge_to_file(config: &RunConfig) -> Result<(Vec<ConvergeRow>, Vec<Check>), CliError> {
    config.validate()?;
    let rows = run_converge(config, &config.converge_cutoffs())?;
    let checks = converge::convergence_checks(&rows);
    ensure_dir(&config.out)?;
    write(&config.out.join(CONVERGE_CSV), &converge::to_csv(&rows))?;
    Ok((rows, checks))
}
