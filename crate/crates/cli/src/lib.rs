//! Command-line front end for `subpoisson-core`: parameter sweeps, pulse
//! evolution tables, single-point comparisons, the fibre scenario report and
//! the validation suite.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod units;

use args::{Cli, Command};
use config::Settings;
use error::CliError;
use output::write_output;

pub fn run(cli: &Cli) -> Result<(), CliError> {
    let settings = Settings::load(cli.command.args())?;
    let table = match &cli.command {
        Command::SweepQ(_) => commands::sweep_q(&settings)?,
        Command::PulseEvolution(_) => commands::pulse_evolution(&settings)?,
        Command::Point(_) => commands::point(&settings)?,
        Command::Scenario(_) => commands::scenario(&settings)?,
        Command::Validate(_) => {
            let reports = commands::validate(&settings)?;
            let mut text = String::new();
            for r in &reports {
                text.push_str(&r.to_string());
            }
            let failed = reports.iter().filter(|r| !r.passed()).count();
            text.push_str(&format!(
                "{} of {} criteria passed\n",
                reports.len() - failed,
                reports.len()
            ));
            write_output(text.as_bytes(), settings.output.as_deref())?;
            return if failed == 0 {
                Ok(())
            } else {
                Err(CliError::ChecksFailed {
                    failed,
                    total: reports.len(),
                })
            };
        }
    };
    write_output(&table.render(settings.format), settings.output.as_deref())
}
