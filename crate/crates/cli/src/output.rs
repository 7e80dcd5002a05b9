//! File writers shared by the commands.
//!
//! Every file is written to a `.partial` sibling first and renamed into place,
//! so a failed run never leaves a truncated result behind.

use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::CliError;

/// 17 significant digits, enough to round-trip any f64.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_atomic<F>(path: &Path, body: F) -> Result<(), CliError>
where
    F: FnOnce(&mut dyn Write) -> io::Result<()>,
{
    let partial = partial_path(path);
    let result = (|| {
        let file = fs::File::create(&partial)?;
        let mut w = BufWriter::new(file);
        body(&mut w)?;
        w.flush()?;
        drop(w);
        fs::rename(&partial, path)
    })();
    result.map_err(|e| {
        let _ = fs::remove_file(&partial);
        CliError::Io {
            path: path.to_path_buf(),
            source: e,
        }
    })
}

fn partial_path(path: &Path) -> PathBuf {
    let mut name = path.file_name().map(|s| s.to_os_string()).unwrap_or_default();
    name.push(".partial");
    path.with_file_name(name)
}

/// Comment lines carried at the top of every CSV file.
pub fn write_preamble(w: &mut dyn Write, lines: &[String]) -> io::Result<()> {
    for l in lines {
        writeln!(w, "# {l}")?;
    }
    Ok(())
}

/// CSV body with a mandatory header.
pub fn write_table(w: &mut dyn Write, header: &[&str], rows: &[Vec<String>]) -> io::Result<()> {
    let mut csv = csv::Writer::from_writer(w);
    csv.write_record(header)?;
    for r in rows {
        csv.write_record(r)?;
    }
    csv.flush()?;
    Ok(())
}

pub fn write_json(w: &mut dyn Write, value: &serde_json::Value) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut *w, value)?;
    writeln!(w)
}
