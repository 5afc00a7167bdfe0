//! Command-line front end: JSON configuration, command dispatch, CSV and
//! JSON emission.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::path::Path;

pub use commands::{run, Command, Outcome};
pub use config::{parse_config, Format, Overrides, RunConfig};
pub use error::CliError;

/// Reads and validates a configuration file.
pub fn load_config(path: &Path) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_config(&text).map_err(|e| match e {
        CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
        other => other,
    })
}

/// Runs `cmd` and writes its output once, to `cfg.params.output` or stdout.
pub fn execute(
    cmd: Command,
    cfg: &RunConfig,
    stdout: &mut dyn std::io::Write,
) -> Result<Outcome, CliError> {
    let outcome = run(cmd, cfg)?;
    let text = outcome.report.render(cfg.params.format)?;
    match &cfg.params.output {
        Some(p) => std::fs::write(p, text).map_err(|source| CliError::Io {
            path: p.display().to_string(),
            source,
        })?,
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io {
                path: "<stdout>".into(),
                source,
            })?,
    }
    Ok(outcome)
}
