//! Image-quality metrics: PSNR, SSIM and a feature-space distance hook.

mod psnr;
mod report;
mod ssim;

pub use psnr::{mse, psnr};
pub use report::{
    evaluate_pairs, evaluate_pairs_with_workers, score_pair, ItemFailure, ItemScore, MetricReport,
};
pub use ssim::{ssim, SSIM_C1, SSIM_C2, SSIM_K1, SSIM_K2, SSIM_SIGMA, SSIM_WINDOW};

use crate::error::{Error, Result};
use crate::imagebuf::Image;

/// Euclidean distance between `extractor(a)` and `extractor(b)`.
///
/// The extractor stands in for a pretrained perceptual network; any function
/// mapping an image to a flat feature vector works.
pub fn feature_distance<F>(a: &Image, b: &Image, extractor: F) -> Result<f64>
where
    F: Fn(&Image) -> Vec<f64>,
{
    a.ensure_same_shape(b)?;
    let fa = extractor(a);
    let fb = extractor(b);
    if fa.len() != fb.len() {
        return Err(Error::FeatureLengthMismatch {
            left: fa.len(),
            right: fb.len(),
        });
    }
    Ok(fa
        .iter()
        .zip(&fb)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt())
}
