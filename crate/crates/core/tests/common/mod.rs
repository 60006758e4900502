//! Independent reference implementations and fixtures shared by the
//! integration tests. Nothing here calls into the code paths it checks.

#![allow(dead_code, clippy::needless_range_loop)]

use std::path::Path;

use atmoturb::{save_png, synth, Image};
use rand::Rng;

pub fn random_image<R: Rng>(rng: &mut R, w: usize, h: usize, c: usize) -> Image {
    let data = (0..w * h * c).map(|_| rng.random::<f64>()).collect();
    Image::new(w, h, c, data).unwrap()
}

/// Direct 2-D convolution with a product Gaussian, clamped coordinates.
pub fn dense_blur(img: &Image, sigma: f64) -> Vec<f64> {
    let (w, h, ch) = img.shape();
    let r = (3.0 * sigma).ceil() as isize;
    let g = |t: isize| (-((t * t) as f64) / (2.0 * sigma * sigma)).exp();
    let mut weights = Vec::new();
    let mut norm = 0.0;
    for ty in -r..=r {
        for tx in -r..=r {
            let v = g(tx) * g(ty);
            norm += v;
            weights.push((tx, ty, v));
        }
    }
    let mut out = vec![0.0; w * h * ch];
    for y in 0..h as isize {
        for x in 0..w as isize {
            for c in 0..ch {
                let mut acc = 0.0;
                for &(tx, ty, v) in &weights {
                    let sx = (x + tx).clamp(0, w as isize - 1) as usize;
                    let sy = (y + ty).clamp(0, h as isize - 1) as usize;
                    acc += v * img.get(sx, sy, c);
                }
                out[(y as usize * w + x as usize) * ch + c] = acc / norm;
            }
        }
    }
    out
}

/// Double-loop MSE over pixels and channels.
pub fn brute_mse(a: &Image, b: &Image) -> f64 {
    let (w, h, ch) = a.shape();
    let mut sum = 0.0;
    for y in 0..h {
        for x in 0..w {
            for c in 0..ch {
                let d = a.get(x, y, c) - b.get(x, y, c);
                sum += d * d;
            }
        }
    }
    sum / (w * h * ch) as f64
}

pub fn brute_psnr(a: &Image, b: &Image) -> f64 {
    10.0 * (1.0 / brute_mse(a, b)).log10()
}

/// SSIM evaluated window by window with an explicit 11×11 Gaussian weight
/// table (σ = 1.5), using weighted means, variances and covariance directly.
pub fn dense_ssim(a: &Image, b: &Image) -> f64 {
    const K: usize = 11;
    let (c1, c2) = (0.01f64.powi(2), 0.03f64.powi(2));
    let mut win = [[0.0; K]; K];
    let mut norm = 0.0;
    for (j, row) in win.iter_mut().enumerate() {
        for (i, v) in row.iter_mut().enumerate() {
            let (dx, dy) = (i as f64 - 5.0, j as f64 - 5.0);
            *v = (-(dx * dx + dy * dy) / (2.0 * 1.5 * 1.5)).exp();
            norm += *v;
        }
    }
    let (w, h, ch) = a.shape();
    let mut total = 0.0;
    for c in 0..ch {
        let mut sum = 0.0;
        let mut count = 0;
        for y0 in 0..=h - K {
            for x0 in 0..=w - K {
                let (mut ma, mut mb) = (0.0, 0.0);
                for j in 0..K {
                    for i in 0..K {
                        let wt = win[j][i] / norm;
                        ma += wt * a.get(x0 + i, y0 + j, c);
                        mb += wt * b.get(x0 + i, y0 + j, c);
                    }
                }
                let (mut va, mut vb, mut cov) = (0.0, 0.0, 0.0);
                for j in 0..K {
                    for i in 0..K {
                        let wt = win[j][i] / norm;
                        let da = a.get(x0 + i, y0 + j, c) - ma;
                        let db = b.get(x0 + i, y0 + j, c) - mb;
                        va += wt * da * da;
                        vb += wt * db * db;
                        cov += wt * da * db;
                    }
                }
                sum += ((2.0 * ma * mb + c1) * (2.0 * cov + c2))
                    / ((ma * ma + mb * mb + c1) * (va + vb + c2));
                count += 1;
            }
        }
        total += sum / count as f64;
    }
    total / ch as f64
}

/// Writes `count` synthetic 112×112 face images as `face_XXXX.png`.
pub fn write_faces(dir: &Path, count: usize, seed: u64) {
    std::fs::create_dir_all(dir).unwrap();
    for i in 0..count {
        let img = synth::face(112, seed, i as u64);
        save_png(&img, dir.join(format!("face_{i:04}.png"))).unwrap();
    }
}

/// Every file under `root` as (relative path, bytes), sorted.
pub fn snapshot(root: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out = Vec::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(dir) = stack.pop() {
        for entry in std::fs::read_dir(&dir).unwrap() {
            let p = entry.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                let rel = p.strip_prefix(root).unwrap().to_string_lossy().into_owned();
                out.push((rel, std::fs::read(&p).unwrap()));
            }
        }
    }
    out.sort();
    out
}
