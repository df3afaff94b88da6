//! CSV tables and atomic file writes.

use std::io::Write;
use std::path::{Path, PathBuf};

use crate::config::Format;
use crate::error::CliError;
use crate::report::RunReport;

/// A numeric table destined for one CSV file.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub file_name: String,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(file_name: &str, header: &[&'static str]) -> Self {
        Self {
            file_name: file_name.to_string(),
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    /// Floats use the shortest decimal that round-trips, with an exponent for
    /// very large or small magnitudes.
    pub fn push(&mut self, row: &[f64]) {
        self.push_cells(row.iter().map(|v| format!("{v:?}")).collect());
    }

    pub fn push_cells(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

/// Writes through a temporary file in the same directory, then renames.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), CliError> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| CliError::io(dir, e))?;
    tmp.write_all(contents).map_err(|e| CliError::io(path, e))?;
    tmp.as_file().sync_all().map_err(|e| CliError::io(path, e))?;
    tmp.persist(path).map_err(|e| CliError::io(path, e.error))?;
    Ok(())
}

/// Report plus tables produced by one command.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: RunReport,
    pub tables: Vec<Table>,
}

impl Outcome {
    /// Writes `report.json` and the CSV tables requested by `formats`;
    /// returns the paths written.
    pub fn write(&self, dir: &Path, formats: &[Format]) -> Result<Vec<PathBuf>, CliError> {
        let mut written = Vec::new();
        if formats.contains(&Format::Csv) {
            for table in &self.tables {
                let path = dir.join(&table.file_name);
                write_atomic(&path, table.to_csv().as_bytes())?;
                written.push(path);
            }
        }
        if formats.contains(&Format::Json) {
            let path = dir.join("report.json");
            write_atomic(&path, self.report.to_json()?.as_bytes())?;
            written.push(path);
        }
        Ok(written)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let mut t = Table::new("x.csv", &["t", "v"]);
        t.push(&[1.0, 0.1]);
        t.push(&[2.5, 1e-20]);
        assert_eq!(t.to_csv(), "t,v\n1.0,0.1\n2.5,1e-20\n");
    }

    #[test]
    fn atomic_write_replaces_contents() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("nested").join("a.txt");
        write_atomic(&path, b"first").unwrap();
        write_atomic(&path, b"second").unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "second");
        assert_eq!(std::fs::read_dir(path.parent().unwrap()).unwrap().count(), 1);
    }
}
