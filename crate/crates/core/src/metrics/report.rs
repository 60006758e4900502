use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use super::{psnr, ssim};
use crate::datagen::Manifest;
use crate::error::Result;
use crate::imagebuf::{load_png, Image};

/// Scores of one restored image against its clean reference.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ItemScore {
    pub id: String,
    /// dB; `f64::INFINITY` when the images are identical.
    pub psnr: f64,
    pub ssim: f64,
}

impl ItemScore {
    pub fn psnr_is_max(&self) -> bool {
        self.psnr.is_infinite()
    }
}

/// A row that could not be scored.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ItemFailure {
    pub id: String,
    pub reason: String,
}

/// Aggregated PSNR/SSIM over a set of image pairs.
///
/// `mean_psnr` skips infinite (identical-pair) entries; it and `mean_ssim`
/// are `None` when nothing contributes.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricReport {
    pub count: usize,
    pub mean_psnr: Option<f64>,
    pub mean_ssim: Option<f64>,
    pub max_psnr_count: usize,
    pub per_item: Vec<ItemScore>,
    pub failures: Vec<ItemFailure>,
}

impl MetricReport {
    pub fn from_items(per_item: Vec<ItemScore>, failures: Vec<ItemFailure>) -> Self {
        let finite: Vec<f64> = per_item
            .iter()
            .map(|i| i.psnr)
            .filter(|p| p.is_finite())
            .collect();
        let mean = |v: &[f64]| (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64);
        let ssims: Vec<f64> = per_item.iter().map(|i| i.ssim).collect();
        MetricReport {
            count: per_item.len(),
            mean_psnr: mean(&finite),
            mean_ssim: mean(&ssims),
            max_psnr_count: per_item.len() - finite.len(),
            per_item,
            failures,
        }
    }

    /// One JSON object per line: `item` records, then `failure` records, then
    /// a single `summary` record. Infinite PSNR is written as `null` with
    /// `"psnr_max": true`.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for item in &self.per_item {
            let psnr = item.psnr.is_finite().then_some(item.psnr);
            let rec = json!({
                "record": "item",
                "id": item.id,
                "psnr": psnr,
                "psnr_max": item.psnr_is_max(),
                "ssim": item.ssim,
            });
            writeln!(out, "{rec}").unwrap();
        }
        for f in &self.failures {
            let rec = json!({ "record": "failure", "id": f.id, "reason": f.reason });
            writeln!(out, "{rec}").unwrap();
        }
        let summary = json!({
            "record": "summary",
            "count": self.count,
            "mean_psnr": self.mean_psnr,
            "mean_ssim": self.mean_ssim,
            "max_psnr_count": self.max_psnr_count,
            "failure_count": self.failures.len(),
        });
        writeln!(out, "{summary}").unwrap();
        out
    }

    /// Fixed-width text table with a trailing mean row.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{:<16} {:>10} {:>8}", "id", "psnr_db", "ssim").unwrap();
        for item in &self.per_item {
            let psnr = if item.psnr_is_max() {
                "max".to_string()
            } else {
                format!("{:.4}", item.psnr)
            };
            writeln!(out, "{:<16} {:>10} {:>8.4}", item.id, psnr, item.ssim).unwrap();
        }
        for f in &self.failures {
            writeln!(out, "{:<16} FAILED: {}", f.id, f.reason).unwrap();
        }
        let fmt = |v: Option<f64>| v.map_or_else(|| "n/a".to_string(), |v| format!("{v:.4}"));
        writeln!(
            out,
            "{:<16} {:>10} {:>8}   count={} max_psnr={} failed={}",
            "mean",
            fmt(self.mean_psnr),
            fmt(self.mean_ssim),
            self.count,
            self.max_psnr_count,
            self.failures.len()
        )
        .unwrap();
        out
    }
}

/// PSNR and SSIM of `candidate` against `reference`.
pub fn score_pair(id: &str, reference: &Image, candidate: &Image) -> Result<ItemScore> {
    Ok(ItemScore {
        id: id.to_string(),
        psnr: psnr(reference, candidate)?,
        ssim: ssim(reference, candidate)?,
    })
}

/// Scores `restored_dir/<id>.png` against each row's clean image.
///
/// Rows that fail (missing file, load error, shape mismatch) are recorded in
/// `failures` and evaluation continues. Output order follows the manifest.
pub fn evaluate_pairs(manifest: &Manifest, restored_dir: &Path) -> MetricReport {
    evaluate_pairs_with_workers(manifest, restored_dir, None)
}

/// [`evaluate_pairs`] on a pool of `workers` threads (`None` = all cores).
pub fn evaluate_pairs_with_workers(
    manifest: &Manifest,
    restored_dir: &Path,
    workers: Option<usize>,
) -> MetricReport {
    let run = || {
        manifest
            .rows
            .par_iter()
            .map(|row| {
                let scored = (|| {
                    let clean = load_png(manifest.resolve(&row.clean_path))?;
                    let restored = load_png(restored_dir.join(format!("{}.png", row.id)))?;
                    score_pair(&row.id, &clean, &restored)
                })();
                scored.map_err(|e| ItemFailure {
                    id: row.id.clone(),
                    reason: e.to_string(),
                })
            })
            .collect::<Vec<_>>()
    };
    let results = match workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .expect("thread pool")
            .install(run),
        None => run(),
    };
    let mut items = Vec::new();
    let mut failures = Vec::new();
    for r in results {
        match r {
            Ok(item) => items.push(item),
            Err(f) => failures.push(f),
        }
    }
    MetricReport::from_items(items, failures)
}
