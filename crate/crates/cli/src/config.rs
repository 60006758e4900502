//! `gen-dataset --config` files. Keys are the flag names; flags win.

use std::path::{Path, PathBuf};

use atmoturb::datagen::OrderChoice;
use serde::Deserialize;

#[derive(Deserialize, Debug, Default)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct DatasetFile {
    pub input_dir: Option<PathBuf>,
    pub output_dir: Option<PathBuf>,
    pub seed: Option<u64>,
    pub eta: Option<f64>,
    pub patch_n: Option<usize>,
    pub field_sigma: Option<f64>,
    pub m_points: Option<OneOrMany<usize>>,
    pub blur_sigma: Option<OneOrMany<f64>>,
    pub noise_sigma: Option<f64>,
    pub order: Option<OrderChoice>,
    pub width: Option<usize>,
    pub height: Option<usize>,
    pub center_crop: Option<bool>,
    pub limit: Option<usize>,
    pub workers: Option<usize>,
}

/// A scalar or a list, so `m-points = 1000` and `m-points = [1000, 3000]` both parse.
#[derive(Deserialize, Debug, Clone, PartialEq)]
#[serde(untagged)]
pub enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T> OneOrMany<T> {
    pub fn into_vec(self) -> Vec<T> {
        match self {
            OneOrMany::One(v) => vec![v],
            OneOrMany::Many(v) => v,
        }
    }
}

impl DatasetFile {
    pub fn load(path: &Path) -> Result<DatasetFile, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        toml::from_str(&text).map_err(|e| {
            let msg = e.message().to_string();
            format!("invalid config {}: {msg}", path.display())
        })
    }
}
