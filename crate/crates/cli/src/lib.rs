//! Front end for `pinchsec`: config files, sweeps and CSV output.

pub mod config_file;
pub mod csv_out;
pub mod error;
pub mod lengths;
pub mod report;
pub mod sweep;
pub mod table1;

pub use config_file::{load_config, parse_config};
pub use error::CliError;
pub use lengths::LengthSpec;
pub use sweep::{Axis, Mode, SweepSpec};
