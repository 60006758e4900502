//! Reproducible degraded-dataset generation.
//!
//! Inputs are enumerated in sorted filename order; the position of a file in
//! that order is its index, and its seed is [`derive_seed`]`(master, index)`.
//! Every output byte is a function of the config alone, whatever the worker
//! count.
//!
//! Output layout:
//!
//! ```text
//! output_dir/
//!   manifest.jsonl        header + one row per quad
//!   baseline.jsonl        PSNR/SSIM of distorted vs clean (metrics report)
//!   baseline.txt          the same as a text table
//!   clean/<id>.png
//!   blur/<id>.png
//!   deform/<id>.png
//!   distort/<id>.png
//! ```

mod manifest;
mod seed;

pub use manifest::{Manifest, ManifestRow, MANIFEST_FORMAT, MANIFEST_VERSION};
pub use seed::{derive_seed, mix64};

use std::fs;
use std::path::{Path, PathBuf};

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::imagebuf::{load_png, save_png, Image};
use crate::metrics::{score_pair, ItemScore, MetricReport};
use crate::rng::{stream, Stream};
use crate::turbsim::{degrade, DegradationParams, Order};

pub const CLEAN_DIR: &str = "clean";
pub const BLUR_DIR: &str = "blur";
pub const DEFORM_DIR: &str = "deform";
pub const DISTORT_DIR: &str = "distort";
pub const MANIFEST_FILE: &str = "manifest.jsonl";
pub const BASELINE_FILE: &str = "baseline.jsonl";
pub const BASELINE_TABLE_FILE: &str = "baseline.txt";

/// How each image picks its blur/warp composition order.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrderChoice {
    BlurWarp,
    WarpBlur,
    /// Uniform over both orders, per image.
    #[default]
    Random,
}

impl std::str::FromStr for OrderChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "blur-warp" => Ok(OrderChoice::BlurWarp),
            "warp-blur" => Ok(OrderChoice::WarpBlur),
            "random" => Ok(OrderChoice::Random),
            other => Err(Error::InvalidParameter(format!("unknown order {other:?}"))),
        }
    }
}

/// Dataset generation settings. Defaults follow the 112×112 face setup.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DatasetConfig {
    pub input_dir: PathBuf,
    pub output_dir: PathBuf,
    pub master_seed: u64,
    pub eta: f64,
    pub patch_n: usize,
    pub field_sigma: f64,
    pub m_choices: Vec<usize>,
    pub blur_choices: Vec<f64>,
    pub noise_sigma: f64,
    pub order: OrderChoice,
    pub image_width: usize,
    pub image_height: usize,
    /// Center-crop larger inputs instead of rejecting them.
    pub center_crop: bool,
    pub limit: Option<usize>,
}

pub const DEFAULT_ETA: f64 = 0.13;
pub const DEFAULT_PATCH_N: usize = 4;
pub const DEFAULT_FIELD_SIGMA: f64 = 16.0;
pub const DEFAULT_M_CHOICES: [usize; 4] = [1000, 3000, 7000, 10000];
pub const DEFAULT_BLUR_CHOICES: [f64; 4] = [1.0, 2.0, 3.0, 4.0];
pub const DEFAULT_IMAGE_SIZE: usize = 112;

impl DatasetConfig {
    pub fn new(input_dir: impl Into<PathBuf>, output_dir: impl Into<PathBuf>) -> Self {
        DatasetConfig {
            input_dir: input_dir.into(),
            output_dir: output_dir.into(),
            master_seed: 0,
            eta: DEFAULT_ETA,
            patch_n: DEFAULT_PATCH_N,
            field_sigma: DEFAULT_FIELD_SIGMA,
            m_choices: DEFAULT_M_CHOICES.to_vec(),
            blur_choices: DEFAULT_BLUR_CHOICES.to_vec(),
            noise_sigma: 0.0,
            order: OrderChoice::Random,
            image_width: DEFAULT_IMAGE_SIZE,
            image_height: DEFAULT_IMAGE_SIZE,
            center_crop: false,
            limit: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.m_choices.is_empty() || self.blur_choices.is_empty() {
            return Err(Error::InvalidParameter(
                "m and blur choice lists must be non-empty".into(),
            ));
        }
        if self.image_width == 0 || self.image_height == 0 {
            return Err(Error::InvalidParameter("image size must be positive".into()));
        }
        for &blur_sigma in &self.blur_choices {
            self.params_with(0, blur_sigma, Order::BlurThenWarp).validate()?;
        }
        if self.image_width < self.patch_n || self.image_height < self.patch_n {
            return Err(Error::ImageTooSmall {
                width: self.image_width,
                height: self.image_height,
                required: self.patch_n,
            });
        }
        Ok(())
    }

    fn params_with(&self, m_points: usize, blur_sigma: f64, order: Order) -> DegradationParams {
        DegradationParams {
            eta: self.eta,
            patch_n: self.patch_n,
            field_sigma: self.field_sigma,
            m_points,
            blur_sigma,
            noise_sigma: self.noise_sigma,
            order,
            seed: 0,
        }
    }
}

/// Draws `m_points`, `blur_sigma` and (for [`OrderChoice::Random`]) the order,
/// each uniformly and in that sequence. The returned `seed` is 0; callers set it.
pub fn sample_params<R: Rng + ?Sized>(rng: &mut R, config: &DatasetConfig) -> DegradationParams {
    let m_points = config.m_choices[rng.random_range(0..config.m_choices.len())];
    let blur_sigma = config.blur_choices[rng.random_range(0..config.blur_choices.len())];
    let order = match config.order {
        OrderChoice::BlurWarp => Order::BlurThenWarp,
        OrderChoice::WarpBlur => Order::WarpThenBlur,
        OrderChoice::Random => Order::ALL[rng.random_range(0..2)],
    };
    config.params_with(m_points, blur_sigma, order)
}

/// Parameters for image `index`: seed from [`derive_seed`], the rest from
/// [`sample_params`] on that seed's parameter stream.
pub fn params_for_index(config: &DatasetConfig, index: u64) -> DegradationParams {
    let seed = derive_seed(config.master_seed, index);
    DegradationParams {
        seed,
        ..sample_params(&mut stream(seed, Stream::Params), config)
    }
}

/// Result of a generation run.
#[derive(Clone, Debug)]
pub struct DatasetOutcome {
    pub manifest: Manifest,
    pub manifest_path: PathBuf,
    /// Distorted-vs-clean scores, computed on the quantized images as stored.
    pub baseline: MetricReport,
    /// Inputs that could not be used, with the reason.
    pub skipped: Vec<(PathBuf, String)>,
}

/// Sorted `.png` files (case-insensitive extension) directly inside `dir`.
pub fn list_inputs(dir: &Path) -> Result<Vec<PathBuf>> {
    let entries = fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
    let mut files = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| Error::io(dir, e))?.path();
        let is_png = path
            .extension()
            .and_then(|e| e.to_str())
            .is_some_and(|e| e.eq_ignore_ascii_case("png"));
        if is_png && path.is_file() {
            files.push(path);
        }
    }
    files.sort_by(|a, b| a.file_name().cmp(&b.file_name()));
    Ok(files)
}

fn fit_to_size(img: Image, config: &DatasetConfig) -> Result<Image> {
    let (w, h) = (config.image_width, config.image_height);
    if img.width() == w && img.height() == h {
        return Ok(img);
    }
    if config.center_crop && img.width() >= w && img.height() >= h {
        return img.center_crop(w, h);
    }
    Err(Error::InvalidImage(format!(
        "size {}x{} does not match required {w}x{h}",
        img.width(),
        img.height()
    )))
}

fn process_one(
    config: &DatasetConfig,
    index: u64,
    path: &Path,
) -> Result<(ManifestRow, ItemScore)> {
    let clean = fit_to_size(load_png(path)?, config)?.quantized();
    let params = params_for_index(config, index);
    let quad = degrade(&clean, &params)?;

    let id = format!("{index:06}");
    let rel = |dir: &str| format!("{dir}/{id}.png");
    let out = &config.output_dir;
    save_png(&quad.clean, out.join(rel(CLEAN_DIR)))?;
    save_png(&quad.blurred, out.join(rel(BLUR_DIR)))?;
    save_png(&quad.deformed, out.join(rel(DEFORM_DIR)))?;
    save_png(&quad.distorted, out.join(rel(DISTORT_DIR)))?;

    let score = score_pair(&id, &quad.clean, &quad.distorted.quantized())?;
    let row = ManifestRow {
        id: id.clone(),
        index,
        source: path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default(),
        clean_path: rel(CLEAN_DIR),
        blurred_path: rel(BLUR_DIR),
        deformed_path: rel(DEFORM_DIR),
        distorted_path: rel(DISTORT_DIR),
        params,
    };
    Ok((row, score))
}

/// Generates the dataset using all available cores.
pub fn generate_dataset(config: &DatasetConfig) -> Result<DatasetOutcome> {
    generate_dataset_with_workers(config, None)
}

/// Generates the dataset on `workers` threads (`None` = all cores).
pub fn generate_dataset_with_workers(
    config: &DatasetConfig,
    workers: Option<usize>,
) -> Result<DatasetOutcome> {
    config.validate()?;
    let mut inputs = list_inputs(&config.input_dir)?;
    if inputs.is_empty() {
        return Err(Error::EmptyInput(config.input_dir.clone()));
    }
    if let Some(limit) = config.limit {
        inputs.truncate(limit);
    }
    for dir in [CLEAN_DIR, BLUR_DIR, DEFORM_DIR, DISTORT_DIR] {
        let d = config.output_dir.join(dir);
        fs::create_dir_all(&d).map_err(|e| Error::io(&d, e))?;
    }

    let run = || {
        inputs
            .par_iter()
            .enumerate()
            .map(|(i, path)| process_one(config, i as u64, path))
            .collect::<Vec<_>>()
    };
    let results = match workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Error::InvalidParameter(e.to_string()))?
            .install(run),
        None => run(),
    };

    let mut rows = Vec::new();
    let mut scores = Vec::new();
    let mut skipped = Vec::new();
    for (path, result) in inputs.iter().zip(results) {
        match result {
            Ok((row, score)) => {
                rows.push(row);
                scores.push(score);
            }
            Err(e) => skipped.push((path.clone(), e.to_string())),
        }
    }
    if rows.is_empty() {
        return Err(Error::EmptyInput(config.input_dir.clone()));
    }

    let manifest = Manifest {
        root: config.output_dir.clone(),
        config: config.clone(),
        rows,
    };
    let manifest_path = config.output_dir.join(MANIFEST_FILE);
    manifest.save(&manifest_path)?;

    let baseline = MetricReport::from_items(scores, Vec::new());
    let write = |name: &str, text: String| {
        let p = config.output_dir.join(name);
        fs::write(&p, text).map_err(|e| Error::io(&p, e))
    };
    write(BASELINE_FILE, baseline.to_jsonl())?;
    write(BASELINE_TABLE_FILE, baseline.to_table())?;

    Ok(DatasetOutcome {
        manifest,
        manifest_path,
        baseline,
        skipped,
    })
}
