pub mod commutators;
pub mod maxwell;
pub mod tensoralg;
pub mod transforms;

use crate::config::{RunConfig, Suite};
use crate::report::{Check, SuiteReport};
use crate::{converge, CliError};

pub fn run_suite(suite: Suite, config: &RunConfig) -> Result<SuiteReport, CliError> {
    let checks: Vec<Check> = match suite {
        Suite::Tensoralg => tensoralg::run(config)?,
        Suite::Maxwell => maxwell::run(config)?,
        Suite::Transforms => transforms::run(config)?,
        Suite::Commutators => commutators::run(config)?,
        Suite::Converge => converge::run(config)?,
    };
    Ok(SuiteReport::new(suite.name(), checks))
}
