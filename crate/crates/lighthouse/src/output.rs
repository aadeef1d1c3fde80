//! CSV tables and the run manifest, written atomically (temp file + rename).

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::RunConfig;
use crate::error::CliError;

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::Text(x.to_string())
    }
}

impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::Int(x as i64)
    }
}

/// 17 significant digits: enough to round-trip any `f64`.
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
    } else if x.is_infinite() {
        if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{x:.16e}")
    }
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(x) => fmt_f64(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Table {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_bytes(&self) -> Result<Vec<u8>, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header)
            .map_err(|e| CliError::Io(e.to_string()))?;
        for r in &self.rows {
            w.write_record(r.iter().map(Cell::render))
                .map_err(|e| CliError::Io(e.to_string()))?;
        }
        w.into_inner().map_err(|e| CliError::Io(e.to_string()))
    }
}

pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| CliError::Io(e.to_string()))?;
    Ok(())
}

/// Files produced by one command.
#[derive(Debug)]
pub struct Outputs {
    pub dir: PathBuf,
    pub files: Vec<String>,
}

#[derive(Serialize)]
struct Manifest<'a> {
    command: &'a str,
    figure: Option<&'a str>,
    version: &'a str,
    outputs: &'a [String],
    config: &'a RunConfig,
}

impl Outputs {
    pub fn new(dir: &Path) -> Self {
        Outputs {
            dir: dir.to_path_buf(),
            files: Vec::new(),
        }
    }

    pub fn table(&mut self, name: &str, t: &Table) -> Result<(), CliError> {
        write_atomic(&self.dir.join(name), &t.to_bytes()?)?;
        self.files.push(name.to_string());
        Ok(())
    }

    pub fn manifest(
        &self,
        command: &str,
        figure: Option<&str>,
        cfg: &RunConfig,
    ) -> Result<(), CliError> {
        let m = Manifest {
            command,
            figure,
            version: env!("CARGO_PKG_VERSION"),
            outputs: &self.files,
            config: cfg,
        };
        let mut text = serde_json::to_string_pretty(&m).map_err(|e| CliError::Io(e.to_string()))?;
        text.push('\n');
        write_atomic(&self.dir.join("manifest.json"), text.as_bytes())
    }
}
