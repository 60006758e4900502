use crate::error::{Error, Result};
use crate::imagebuf::Image;
use crate::turbsim::gaussian_kernel;

/// Side of the square SSIM window.
pub const SSIM_WINDOW: usize = 11;
/// Std of the Gaussian SSIM window.
pub const SSIM_SIGMA: f64 = 1.5;
pub const SSIM_K1: f64 = 0.01;
pub const SSIM_K2: f64 = 0.03;

/// `(K1 · L)²` and `(K2 · L)²` for dynamic range `L = 1`.
pub const SSIM_C1: f64 = SSIM_K1 * SSIM_K1;
pub const SSIM_C2: f64 = SSIM_K2 * SSIM_K2;

/// Separable valid-mode filtering: `(w − 10) × (h − 10)` outputs.
fn filter_valid(taps: &[f64], plane: &[f64], width: usize, height: usize) -> Vec<f64> {
    let k = taps.len();
    let ow = width - k + 1;
    let oh = height - k + 1;
    let mut rows = vec![0.0; ow * height];
    for y in 0..height {
        let src = &plane[y * width..(y + 1) * width];
        for x in 0..ow {
            rows[y * ow + x] = taps.iter().zip(&src[x..x + k]).map(|(t, s)| t * s).sum();
        }
    }
    let mut out = vec![0.0; ow * oh];
    for y in 0..oh {
        for x in 0..ow {
            out[y * ow + x] = taps
                .iter()
                .enumerate()
                .map(|(i, t)| t * rows[(y + i) * ow + x])
                .sum();
        }
    }
    out
}

fn ssim_plane(taps: &[f64], a: &[f64], b: &[f64], width: usize, height: usize) -> f64 {
    let prod = |f: fn(f64, f64) -> f64| -> Vec<f64> {
        a.iter().zip(b).map(|(x, y)| f(*x, *y)).collect()
    };
    let mu_a = filter_valid(taps, a, width, height);
    let mu_b = filter_valid(taps, b, width, height);
    let aa = filter_valid(taps, &prod(|x, _| x * x), width, height);
    let bb = filter_valid(taps, &prod(|_, y| y * y), width, height);
    let ab = filter_valid(taps, &prod(|x, y| x * y), width, height);

    let n = mu_a.len();
    let total: f64 = (0..n)
        .map(|i| {
            let (ma, mb) = (mu_a[i], mu_b[i]);
            let var_a = aa[i] - ma * ma;
            let var_b = bb[i] - mb * mb;
            let cov = ab[i] - ma * mb;
            ((2.0 * ma * mb + SSIM_C1) * (2.0 * cov + SSIM_C2))
                / ((ma * ma + mb * mb + SSIM_C1) * (var_a + var_b + SSIM_C2))
        })
        .sum();
    total / n as f64
}

/// Single-scale SSIM with an 11×11 Gaussian window (σ = 1.5), K1 = 0.01,
/// K2 = 0.03 and dynamic range 1. Only window positions fully inside the
/// image count; the score is averaged over positions and then channels.
pub fn ssim(a: &Image, b: &Image) -> Result<f64> {
    a.ensure_same_shape(b)?;
    let (w, h, ch) = a.shape();
    if w < SSIM_WINDOW || h < SSIM_WINDOW {
        return Err(Error::ImageTooSmall {
            width: w,
            height: h,
            required: SSIM_WINDOW,
        });
    }
    let kernel = gaussian_kernel(SSIM_SIGMA, SSIM_WINDOW / 2)?;
    let taps = kernel.weights();
    let sum: f64 = (0..ch)
        .map(|c| ssim_plane(taps, &a.plane(c), &b.plane(c), w, h))
        .sum();
    Ok(sum / ch as f64)
}
