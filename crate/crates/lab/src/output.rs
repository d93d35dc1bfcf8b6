//! CSV and JSON writers. Every CSV starts with a `# config-hash:` comment.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use crate::error::{LabError, Result};
use crate::solver::{RunSeries, NORM_COLUMNS};

/// Write `# config-hash: <hash>`, a header row and the data rows.
pub fn write_csv<W: Write>(mut out: W, hash: &str, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    writeln!(out, "# config-hash: {hash}").map_err(io("<csv>"))?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    w.flush().map_err(io("<csv>"))?;
    Ok(())
}

pub fn series_rows(series: &RunSeries) -> Vec<Vec<String>> {
    series.records.iter().map(|r| std::iter::once(r.t).chain(r.norms).map(num).collect()).collect()
}

pub fn series_header() -> Vec<&'static str> {
    std::iter::once("t").chain(NORM_COLUMNS).collect()
}

pub fn num(x: f64) -> String {
    format!("{x}")
}

pub fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|source| LabError::Io { path: path.display().to_string(), source })
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut f = create(path)?;
    serde_json::to_writer_pretty(&mut f, value)?;
    writeln!(f).map_err(io(&path.display().to_string()))?;
    f.flush().map_err(io(&path.display().to_string()))
}

pub fn io(path: &str) -> impl Fn(std::io::Error) -> LabError + '_ {
    move |source| LabError::Io { path: path.to_string(), source }
}
