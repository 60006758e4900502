use crate::error::{Error, Result};
use crate::imagebuf::Image;

/// A normalized, symmetric 1-D convolution kernel with `2 * radius + 1` taps.
#[derive(Clone, Debug, PartialEq)]
pub struct Kernel1D {
    radius: usize,
    weights: Vec<f64>,
}

impl Kernel1D {
    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Weight at signed offset `t` from the center.
    #[inline]
    pub fn at(&self, t: isize) -> f64 {
        self.weights[(t + self.radius as isize) as usize]
    }

    /// Folds the kernel onto a length-`n` signal under replicate padding.
    ///
    /// Row `j` of the result holds the weight each input sample receives when
    /// producing output `j`, so `out[j] = Σ_k m[j][k] · in[k]`.
    pub(crate) fn folded(&self, n: usize) -> Vec<Vec<f64>> {
        let r = self.radius as isize;
        (0..n as isize)
            .map(|j| {
                let mut row = vec![0.0; n];
                for t in -r..=r {
                    let k = (j + t).clamp(0, n as isize - 1) as usize;
                    row[k] += self.at(t);
                }
                row
            })
            .collect()
    }
}

/// Sampled Gaussian `exp(-t² / 2σ²)` on `[-radius, radius]`, renormalized to sum 1.
pub fn gaussian_kernel(sigma: f64, radius: usize) -> Result<Kernel1D> {
    if !sigma.is_finite() || sigma <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "gaussian sigma must be positive, got {sigma}"
        )));
    }
    let half: Vec<f64> = (0..=radius)
        .map(|d| (-((d * d) as f64) / (2.0 * sigma * sigma)).exp())
        .collect();
    let mut weights: Vec<f64> = half.iter().rev().chain(&half[1..]).copied().collect();
    let sum: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= sum;
    }
    Ok(Kernel1D { radius, weights })
}

/// Truncation radius used for every Gaussian in this crate.
pub fn three_sigma_radius(sigma: f64) -> usize {
    (3.0 * sigma).ceil() as usize
}

/// Separable convolution of a dense `width × height` plane with replicate
/// padding, rows first.
///
/// Each output is formed as `x_j + Σ w_t (x_{j+t} − x_j)`, which equals the
/// plain weighted sum for a normalized kernel and leaves constant regions
/// bit-exact.
pub(crate) fn convolve_plane(kernel: &Kernel1D, plane: &[f64], width: usize, height: usize) -> Vec<f64> {
    let r = kernel.radius;
    let w = &kernel.weights;

    let mut tmp = vec![0.0; plane.len()];
    let mut padded = vec![0.0; width + 2 * r];
    for y in 0..height {
        let row = &plane[y * width..(y + 1) * width];
        padded[..r].fill(row[0]);
        padded[r..r + width].copy_from_slice(row);
        padded[r + width..].fill(row[width - 1]);
        for (x, out) in tmp[y * width..(y + 1) * width].iter_mut().enumerate() {
            let center = padded[x + r];
            let acc: f64 = w
                .iter()
                .zip(&padded[x..x + 2 * r + 1])
                .map(|(wt, s)| wt * (s - center))
                .sum();
            *out = center + acc;
        }
    }

    let mut out = vec![0.0; plane.len()];
    let mut acc = vec![0.0; width];
    for y in 0..height {
        let center = &tmp[y * width..(y + 1) * width];
        acc.fill(0.0);
        for (t, wt) in w.iter().enumerate() {
            let sy = (y + t).saturating_sub(r).min(height - 1);
            let src = &tmp[sy * width..(sy + 1) * width];
            for ((a, s), c) in acc.iter_mut().zip(src).zip(center) {
                *a += wt * (s - c);
            }
        }
        for ((o, c), a) in out[y * width..(y + 1) * width].iter_mut().zip(center).zip(&acc) {
            *o = c + a;
        }
    }
    out
}

/// Gaussian blur with a `ceil(3σ)`-radius kernel and replicate edges.
///
/// `sigma == 0` returns a copy of the input. Channels are blurred independently.
pub fn gaussian_blur(img: &Image, sigma: f64) -> Result<Image> {
    if sigma == 0.0 {
        return Ok(img.clone());
    }
    if sigma.is_nan() || sigma < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "blur sigma must be non-negative, got {sigma}"
        )));
    }
    let kernel = gaussian_kernel(sigma, three_sigma_radius(sigma))?;
    let (w, h, _) = img.shape();
    let planes: Vec<Vec<f64>> = (0..img.channels())
        .map(|c| convolve_plane(&kernel, &img.plane(c), w, h))
        .collect();
    Image::from_planes(w, h, &planes)
}
