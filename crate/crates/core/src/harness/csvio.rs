//! CSV output with a `# key = value` comment header.
//!
//! Floats are written with 17 significant digits (`{:.16e}`), which
//! round-trips every f64 exactly.

use crate::error::{FracError, Result};
use std::fs;
use std::io::Write;
use std::path::Path;

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes comments, then `header`, then `rows`. Parent directories are created.
pub fn write_csv<I>(path: &Path, comments: &[(String, String)], header: &[&str], rows: I) -> Result<()>
where
    I: IntoIterator<Item = Vec<String>>,
{
    let io = |e: std::io::Error| FracError::io(path, e);
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(io)?;
    }
    let mut out = std::io::BufWriter::new(fs::File::create(path).map_err(io)?);
    for (k, v) in comments {
        writeln!(out, "# {k} = {v}").map_err(io)?;
    }
    let mut w = csv::Writer::from_writer(out);
    let csv_err = |e: csv::Error| FracError::Parse { path: path.to_path_buf(), line: 0, msg: e.to_string() };
    w.write_record(header).map_err(csv_err)?;
    for r in rows {
        if r.len() != header.len() {
            return Err(FracError::DimensionMismatch { expected: header.len(), found: r.len() });
        }
        w.write_record(&r).map_err(csv_err)?;
    }
    w.flush().map_err(io)?;
    Ok(())
}

/// A parsed CSV file: comment entries, header and rows as strings.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    pub comments: Vec<(String, String)>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn comment(&self, key: &str) -> Option<&str> {
        self.comments.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}

pub fn read_csv(path: &Path) -> Result<CsvTable> {
    let text = fs::read_to_string(path).map_err(|e| FracError::io(path, e))?;
    let perr = |line: usize, msg: String| FracError::Parse { path: path.to_path_buf(), line, msg };
    let mut comments = vec![];
    for (i, line) in text.lines().enumerate() {
        let Some(c) = line.strip_prefix('#') else { continue };
        let (k, v) = c.split_once('=').ok_or_else(|| perr(i + 1, "comment is not 'key = value'".into()))?;
        comments.push((k.trim().to_string(), v.trim().to_string()));
    }
    let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
    let header: Vec<String> = r.headers().map_err(|e| perr(0, e.to_string()))?.iter().map(String::from).collect();
    let mut rows = vec![];
    for rec in r.records() {
        let rec = rec.map_err(|e| perr(e.position().map_or(0, |p| p.line() as usize), e.to_string()))?;
        rows.push(rec.iter().map(String::from).collect());
    }
    Ok(CsvTable { comments, header, rows })
}
