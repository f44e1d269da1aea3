//! Config files are TOML restricted in practice to flat dotted keys:
//!
//! ```text
//! # comments run to the end of the line
//! link.rho_t_db = 22
//! geometry.cell_side_m = 10
//! ```
//!
//! Every key is optional; missing ones keep their defaults. Unknown keys are
//! rejected.

use std::path::Path;

use pinchsec_core::config::Validation;
use pinchsec_core::SystemConfig;

use crate::error::CliError;

pub fn parse_config(text: &str) -> Result<SystemConfig, CliError> {
    let config: SystemConfig = toml::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
    check(config)
}

/// Reads `path`, or returns the defaults when there is none.
pub fn load_config(path: Option<&Path>) -> Result<SystemConfig, CliError> {
    match path {
        None => Ok(SystemConfig::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|source| CliError::Read {
                path: p.to_path_buf(),
                source,
            })?;
            parse_config(&text)
        }
    }
}

/// Errors abort; warnings go to stderr.
pub fn check(config: SystemConfig) -> Result<SystemConfig, CliError> {
    let Validation { errors, warnings } = config.validate();
    for w in &warnings {
        eprintln!("warning: {w}");
    }
    if errors.is_empty() {
        Ok(config)
    } else {
        let list: Vec<String> = errors.iter().map(ToString::to_string).collect();
        Err(CliError::Config(list.join(", ")))
    }
}
