//! Procedural face-like test images.
//!
//! Aligned face crops are the natural input to the dataset pipeline, but no
//! face corpus ships with this crate. These images stand in for them in tests,
//! examples and benchmarks: an aligned head with eyes, brows, nose and mouth,
//! hair, soft shading, and multi-octave texture on skin and background. Every
//! image is a pure function of `(seed, index)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::datagen::derive_seed;
use crate::imagebuf::Image;

/// Smooth value noise on a lattice of `cells × cells`, bicubic-free (smoothstep) interpolation.
struct ValueNoise {
    cells: usize,
    lattice: Vec<f64>,
}

impl ValueNoise {
    fn new(rng: &mut ChaCha8Rng, cells: usize) -> Self {
        let n = cells + 1;
        ValueNoise {
            cells,
            lattice: (0..n * n).map(|_| rng.random::<f64>() * 2.0 - 1.0).collect(),
        }
    }

    /// `u, v` in `[0, 1]`.
    fn at(&self, u: f64, v: f64) -> f64 {
        let n = self.cells + 1;
        let fx = u.clamp(0.0, 1.0) * self.cells as f64;
        let fy = v.clamp(0.0, 1.0) * self.cells as f64;
        let x0 = (fx.floor() as usize).min(self.cells - 1);
        let y0 = (fy.floor() as usize).min(self.cells - 1);
        let s = |t: f64| t * t * (3.0 - 2.0 * t);
        let tx = s(fx - x0 as f64);
        let ty = s(fy - y0 as f64);
        let l = |x: usize, y: usize| self.lattice[y * n + x];
        let top = l(x0, y0) + tx * (l(x0 + 1, y0) - l(x0, y0));
        let bottom = l(x0, y0 + 1) + tx * (l(x0 + 1, y0 + 1) - l(x0, y0 + 1));
        top + ty * (bottom - top)
    }
}

/// Octaves with amplitude halving as frequency doubles (≈ 1/f spectrum).
struct Fractal(Vec<ValueNoise>);

impl Fractal {
    fn new(rng: &mut ChaCha8Rng, base_cells: usize, octaves: usize) -> Self {
        Fractal(
            (0..octaves)
                .map(|o| ValueNoise::new(rng, base_cells << o))
                .collect(),
        )
    }

    fn at(&self, u: f64, v: f64) -> f64 {
        self.0
            .iter()
            .enumerate()
            .map(|(o, n)| n.at(u, v) / (1 << o) as f64)
            .sum()
    }
}

/// Soft inside-ness of an ellipse: 1 inside, 0 outside, ~`edge` pixels of ramp.
fn ellipse(x: f64, y: f64, cx: f64, cy: f64, rx: f64, ry: f64, edge: f64) -> f64 {
    let d = (((x - cx) / rx).powi(2) + ((y - cy) / ry).powi(2)).sqrt();
    let dist_px = (d - 1.0) * rx.min(ry);
    (0.5 - dist_px / edge).clamp(0.0, 1.0)
}

fn mix(a: [f64; 3], b: [f64; 3], t: f64) -> [f64; 3] {
    [
        a[0] + (b[0] - a[0]) * t,
        a[1] + (b[1] - a[1]) * t,
        a[2] + (b[2] - a[2]) * t,
    ]
}

/// One face-like RGB (or, for every fifth index, grayscale) image of size `size × size`.
pub fn face(size: usize, seed: u64, index: u64) -> Image {
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, index));
    let s = size as f64;
    let mut r = |lo: f64, hi: f64| lo + (hi - lo) * rng.random::<f64>();

    let skin = [r(0.45, 0.9), r(0.3, 0.7), r(0.2, 0.6)];
    let hair = [r(0.02, 0.45), r(0.02, 0.35), r(0.01, 0.3)];
    let bg_a = [r(0.1, 0.9), r(0.1, 0.9), r(0.1, 0.9)];
    let bg_b = [r(0.1, 0.9), r(0.1, 0.9), r(0.1, 0.9)];
    let iris = [r(0.05, 0.4), r(0.05, 0.4), r(0.05, 0.4)];
    let lips = [r(0.5, 0.8), r(0.2, 0.4), r(0.2, 0.4)];

    let cx = s * r(0.47, 0.53);
    let cy = s * r(0.5, 0.56);
    let hrx = s * r(0.3, 0.37);
    let hry = s * r(0.4, 0.47);
    let eye_y = s * r(0.43, 0.47);
    let eye_dx = s * r(0.14, 0.18);
    let eye_rx = s * r(0.055, 0.075);
    let eye_ry = s * r(0.025, 0.035);
    let brow_y = eye_y - s * r(0.06, 0.08);
    let mouth_y = s * r(0.71, 0.76);
    let mouth_rx = s * r(0.08, 0.12);
    let mouth_ry = s * r(0.018, 0.03);
    let hairline = cy - hry * r(0.45, 0.65);
    let light = r(-1.0, 1.0);
    let texture_gain = r(0.04, 0.1);
    let hair_freq = r(0.5, 1.2);
    let bg_noise = Fractal::new(&mut rng, 3, 5);
    let skin_noise = Fractal::new(&mut rng, 6, 4);
    let hair_noise = Fractal::new(&mut rng, 12, 3);
    let gray = index % 5 == 4;

    let channels = if gray { 1 } else { 3 };
    let mut data = Vec::with_capacity(size * size * channels);
    for py in 0..size {
        for px in 0..size {
            let (x, y) = (px as f64 + 0.5, py as f64 + 0.5);
            let (u, v) = (x / s, y / s);

            let mut c = mix(bg_a, bg_b, v);
            let bgt = 0.25 * bg_noise.at(u, v);
            c = c.map(|ch| ch + bgt);

            let head = ellipse(x, y, cx, cy, hrx, hry, 1.5);
            let shade = 0.85 + 0.25 * light * (x - cx) / hrx - 0.15 * ((y - cy) / hry).powi(2);
            let st = texture_gain * skin_noise.at(u, v);
            let skin_px = skin.map(|ch| ch * shade + st);
            c = mix(c, skin_px, head);

            // Hair: upper part of a slightly larger ellipse, streaky texture.
            let hair_mask = ellipse(x, y, cx, cy - hry * 0.05, hrx * 1.08, hry * 1.05, 1.5)
                * ((hairline - y) / 2.0 + 0.5).clamp(0.0, 1.0);
            let streak = 0.12 * (x * hair_freq + 6.0 * hair_noise.at(u, v)).sin()
                + 0.1 * hair_noise.at(u * 1.7, v);
            c = mix(c, hair.map(|ch| ch + streak), hair_mask);

            for side in [-1.0, 1.0] {
                let ex = cx + side * eye_dx;
                let white = ellipse(x, y, ex, eye_y, eye_rx, eye_ry, 1.0);
                c = mix(c, [0.92, 0.9, 0.88], white);
                let iris_m = ellipse(x, y, ex, eye_y, eye_ry * 1.1, eye_ry * 1.1, 1.0) * white;
                c = mix(c, iris, iris_m);
                let pupil = ellipse(x, y, ex, eye_y, eye_ry * 0.45, eye_ry * 0.45, 1.0) * white;
                c = mix(c, [0.02, 0.02, 0.02], pupil);
                let brow = ellipse(x, y, ex, brow_y, eye_rx * 1.2, eye_ry * 0.55, 1.2);
                c = mix(c, hair.map(|ch| ch * 0.9), brow * 0.9);
            }

            let nose = ellipse(x, y, cx + s * 0.01, eye_y + s * 0.15, s * 0.035, s * 0.02, 2.0);
            c = mix(c, skin.map(|ch| ch * 0.6), nose * 0.7);
            let mouth = ellipse(x, y, cx, mouth_y, mouth_rx, mouth_ry, 1.2);
            c = mix(c, lips, mouth);
            let lip_line = ellipse(x, y, cx, mouth_y, mouth_rx * 0.95, mouth_ry * 0.25, 0.8);
            c = mix(c, [0.2, 0.05, 0.05], lip_line);

            if gray {
                data.push(0.299 * c[0] + 0.587 * c[1] + 0.114 * c[2]);
            } else {
                data.extend_from_slice(&c);
            }
        }
    }
    Image::from_vec_clamped(size, size, channels, data).expect("valid synthetic image")
}

/// `count` faces for indices `0..count`.
pub fn faces(count: usize, size: usize, seed: u64) -> Vec<Image> {
    (0..count as u64).map(|i| face(size, seed, i)).collect()
}
