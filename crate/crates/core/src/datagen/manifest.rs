use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::DatasetConfig;
use crate::error::{Error, Result};
use crate::turbsim::DegradationParams;

pub const MANIFEST_FORMAT: &str = "atmoturb-manifest";
pub const MANIFEST_VERSION: u32 = 1;

/// One generated quad. Paths are relative to the manifest's directory.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ManifestRow {
    pub id: String,
    /// Position of the source file in sorted input order; seeds derive from it.
    pub index: u64,
    /// Source file name inside the input directory.
    pub source: String,
    pub clean_path: String,
    pub blurred_path: String,
    pub deformed_path: String,
    pub distorted_path: String,
    pub params: DegradationParams,
}

/// The dataset index: the generating config followed by one row per quad.
#[derive(Clone, Debug, PartialEq)]
pub struct Manifest {
    /// Directory that row paths are relative to. Not serialized.
    pub root: PathBuf,
    pub config: DatasetConfig,
    pub rows: Vec<ManifestRow>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "record", rename_all = "lowercase")]
enum Record {
    Header {
        format: String,
        version: u32,
        config: DatasetConfig,
    },
    Row(ManifestRow),
}

impl Manifest {
    pub fn resolve(&self, relative: &str) -> PathBuf {
        self.root.join(relative)
    }

    /// JSON Lines: a `header` record, then `row` records in index order.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        let header = Record::Header {
            format: MANIFEST_FORMAT.into(),
            version: MANIFEST_VERSION,
            config: self.config.clone(),
        };
        writeln!(out, "{}", serde_json::to_string(&header).unwrap()).unwrap();
        for row in &self.rows {
            let rec = Record::Row(row.clone());
            writeln!(out, "{}", serde_json::to_string(&rec).unwrap()).unwrap();
        }
        out
    }

    pub fn parse(text: &str, root: impl Into<PathBuf>) -> Result<Manifest> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let bad = |n: usize, e: serde_json::Error| Error::Manifest(format!("line {}: {e}", n + 1));
        let (n, first) = lines
            .next()
            .ok_or_else(|| Error::Manifest("empty manifest".into()))?;
        let config = match serde_json::from_str(first).map_err(|e| bad(n, e))? {
            Record::Header {
                format,
                version,
                config,
            } => {
                if format != MANIFEST_FORMAT || version != MANIFEST_VERSION {
                    return Err(Error::Manifest(format!(
                        "unsupported format {format} v{version}"
                    )));
                }
                config
            }
            Record::Row(_) => return Err(Error::Manifest("first record must be the header".into())),
        };
        let mut rows = Vec::new();
        for (n, line) in lines {
            match serde_json::from_str(line).map_err(|e| bad(n, e))? {
                Record::Row(row) => rows.push(row),
                Record::Header { .. } => {
                    return Err(Error::Manifest(format!("line {}: duplicate header", n + 1)))
                }
            }
        }
        let mut ids: Vec<&str> = rows.iter().map(|r| r.id.as_str()).collect();
        ids.sort_unstable();
        if let Some(w) = ids.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Manifest(format!("duplicate id {}", w[0])));
        }
        Ok(Manifest {
            root: root.into(),
            config,
            rows,
        })
    }

    /// Reads a manifest file; row paths resolve against its parent directory.
    pub fn load(path: impl AsRef<Path>) -> Result<Manifest> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let root = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Manifest::parse(&text, root)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_jsonl()).map_err(|e| Error::io(path, e))
    }
}
