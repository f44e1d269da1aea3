//! Plain CSV writing with a fixed number format.

use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use crate::error::CliError;

/// Scientific notation with 9 significant digits.
pub fn sci(x: f64) -> String {
    format!("{x:.8e}")
}

pub fn opt_sci(x: Option<f64>) -> String {
    x.map(sci).unwrap_or_default()
}

/// Rows that can be written under a fixed header.
pub trait Record {
    const HEADER: &'static [&'static str];
    fn fields(&self) -> Vec<String>;
}

pub fn write_records<R: Record, W: Write>(out: W, rows: &[R]) -> Result<(), CliError> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(R::HEADER)?;
    for row in rows {
        w.write_record(row.fields())?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// Writes to `path`, or stdout when absent.
pub fn emit<R: Record>(path: Option<&Path>, rows: &[R]) -> Result<(), CliError> {
    match path {
        Some(p) => {
            let file = File::create(p).map_err(|source| CliError::Write {
                path: p.to_path_buf(),
                source,
            })?;
            write_records(io::BufWriter::new(file), rows)
        }
        None => write_records(io::stdout().lock(), rows),
    }
}
