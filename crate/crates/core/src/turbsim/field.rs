use rand::Rng;
use rand_distr::StandardNormal;

use super::kernel::{gaussian_kernel, three_sigma_radius};
use super::DegradationParams;
use crate::error::{Error, Result};
use crate::imagebuf::Image;

/// Per-pixel displacement in pixels. A zero field is the identity deformation.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorField {
    width: usize,
    height: usize,
    dx: Vec<f64>,
    dy: Vec<f64>,
}

impl VectorField {
    pub fn zeros(width: usize, height: usize) -> Self {
        VectorField {
            width,
            height,
            dx: vec![0.0; width * height],
            dy: vec![0.0; width * height],
        }
    }

    pub fn from_components(width: usize, height: usize, dx: Vec<f64>, dy: Vec<f64>) -> Result<Self> {
        let n = width * height;
        if dx.len() != n || dy.len() != n {
            return Err(Error::InvalidParameter(format!(
                "field components must have {n} entries, got {} and {}",
                dx.len(),
                dy.len()
            )));
        }
        Ok(VectorField { width, height, dx, dy })
    }

    /// A field with the same displacement at every pixel.
    pub fn uniform(width: usize, height: usize, dx: f64, dy: f64) -> Self {
        VectorField {
            width,
            height,
            dx: vec![dx; width * height],
            dy: vec![dy; width * height],
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dx(&self) -> &[f64] {
        &self.dx
    }

    pub fn dy(&self) -> &[f64] {
        &self.dy
    }

    #[inline]
    pub fn at(&self, x: usize, y: usize) -> (f64, f64) {
        let i = y * self.width + x;
        (self.dx[i], self.dy[i])
    }

    pub fn is_zero(&self) -> bool {
        self.dx.iter().chain(&self.dy).all(|&v| v == 0.0)
    }

    pub fn scaled(&self, k: f64) -> VectorField {
        VectorField {
            width: self.width,
            height: self.height,
            dx: self.dx.iter().map(|v| v * k).collect(),
            dy: self.dy.iter().map(|v| v * k).collect(),
        }
    }

    /// Adds an `n × n` patch with its top-left corner at `(x0, y0)`.
    fn add_patch(&mut self, n: usize, dx: &[f64], dy: &[f64], x0: usize, y0: usize) {
        for py in 0..n {
            let dst = (y0 + py) * self.width + x0;
            let src = py * n;
            for px in 0..n {
                self.dx[dst + px] += dx[src + px];
                self.dy[dst + px] += dy[src + px];
            }
        }
    }
}

/// Gaussian smoothing confined to an `n × n` patch with replicate padding.
///
/// The truncated kernel is folded onto the patch once (rows renormalized, so
/// a 1-pixel patch maps to itself exactly), and smoothing a patch costs
/// `O(n³)` regardless of σ.
pub(crate) struct PatchSmoother {
    n: usize,
    /// Row-major `n × n` folded kernel.
    folded: Vec<f64>,
}

impl PatchSmoother {
    pub(crate) fn new(n: usize, sigma: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("patch size must be at least 1".into()));
        }
        let kernel = gaussian_kernel(sigma, three_sigma_radius(sigma))?;
        let mut folded = kernel.folded(n);
        for row in &mut folded {
            let sum: f64 = row.iter().sum();
            row.iter_mut().for_each(|w| *w /= sum);
        }
        Ok(PatchSmoother {
            n,
            folded: folded.concat(),
        })
    }

    /// Smooths every row of `src` into `dst`.
    fn smooth_rows(&self, src: &[f64], dst: &mut [f64]) {
        let n = self.n;
        for (line, out) in src.chunks_exact(n).zip(dst.chunks_exact_mut(n)) {
            for (o, weights) in out.iter_mut().zip(self.folded.chunks_exact(n)) {
                *o = weights.iter().zip(line).map(|(w, x)| w * x).sum();
            }
        }
    }

    fn transpose(&self, src: &[f64], dst: &mut [f64]) {
        let n = self.n;
        for y in 0..n {
            for x in 0..n {
                dst[x * n + y] = src[y * n + x];
            }
        }
    }

    /// Rows, then columns (via transposition).
    fn smooth(&self, values: &mut [f64], scratch: &mut [f64]) {
        match self.n {
            4 => return smooth_fixed::<4>(&self.folded, values),
            8 => return smooth_fixed::<8>(&self.folded, values),
            _ => {}
        }
        self.smooth_rows(values, scratch);
        self.transpose(scratch, values);
        self.smooth_rows(values, scratch);
        self.transpose(scratch, values);
    }

    /// Draws the `dx` noise patch then the `dy` noise patch (row-major standard
    /// normals each) and smooths both, writing into `buf`.
    fn sample_into<R: Rng + ?Sized>(&self, rng: &mut R, buf: &mut PatchBuffers) {
        for v in buf.dx.iter_mut().chain(buf.dy.iter_mut()) {
            *v = rng.sample(StandardNormal);
        }
        self.smooth(&mut buf.dx, &mut buf.scratch);
        self.smooth(&mut buf.dy, &mut buf.scratch);
    }

    pub(crate) fn sample<R: Rng + ?Sized>(&self, eta: f64, rng: &mut R) -> VectorField {
        let mut buf = PatchBuffers::new(self.n);
        self.sample_into(rng, &mut buf);
        VectorField {
            width: self.n,
            height: self.n,
            dx: buf.dx,
            dy: buf.dy,
        }
        .scaled(eta)
    }
}

/// [`PatchSmoother::smooth`] for a compile-time patch size; same arithmetic.
fn smooth_fixed<const N: usize>(folded: &[f64], values: &mut [f64]) {
    let m: &[[f64; N]] = folded.as_chunks::<N>().0;
    let v: &mut [[f64; N]] = values.as_chunks_mut::<N>().0;
    let mut rows = [[0.0; N]; N];
    for y in 0..N {
        for j in 0..N {
            let mut acc = 0.0;
            for k in 0..N {
                acc += m[j][k] * v[y][k];
            }
            rows[y][j] = acc;
        }
    }
    for x in 0..N {
        for j in 0..N {
            let mut acc = 0.0;
            for k in 0..N {
                acc += m[j][k] * rows[k][x];
            }
            v[j][x] = acc;
        }
    }
}

struct PatchBuffers {
    dx: Vec<f64>,
    dy: Vec<f64>,
    scratch: Vec<f64>,
}

impl PatchBuffers {
    fn new(n: usize) -> Self {
        PatchBuffers {
            dx: vec![0.0; n * n],
            dy: vec![0.0; n * n],
            scratch: vec![0.0; n * n],
        }
    }
}

/// One random `patch_n × patch_n` displacement patch: `η · (G_σ ∗ n₁, G_σ ∗ n₂)`
/// with per-pixel standard-normal fields `n₁`, `n₂`.
pub fn patch_field<R: Rng + ?Sized>(
    patch_n: usize,
    field_sigma: f64,
    eta: f64,
    rng: &mut R,
) -> Result<VectorField> {
    Ok(PatchSmoother::new(patch_n, field_sigma)?.sample(eta, rng))
}

/// Sums `m_points` random patches placed uniformly where they fit in the frame.
///
/// Each iteration draws the patch's top-left corner (x then y) and then the
/// patch itself from `rng`. The unit-strength sum is scaled by `eta` once at
/// the end, so the result is exactly `eta` times the `eta = 1` field.
pub fn accumulate_field<R: Rng + ?Sized>(
    width: usize,
    height: usize,
    params: &DegradationParams,
    rng: &mut R,
) -> Result<VectorField> {
    params.validate()?;
    let n = params.patch_n;
    if width < n || height < n {
        return Err(Error::ImageTooSmall {
            width,
            height,
            required: n,
        });
    }
    let mut field = VectorField::zeros(width, height);
    if params.m_points == 0 {
        return Ok(field);
    }
    let smoother = PatchSmoother::new(n, params.field_sigma)?;
    let mut buf = PatchBuffers::new(n);
    for _ in 0..params.m_points {
        let x0 = rng.random_range(0..=width - n);
        let y0 = rng.random_range(0..=height - n);
        smoother.sample_into(rng, &mut buf);
        field.add_patch(n, &buf.dx, &buf.dy, x0, y0);
    }
    Ok(field.scaled(params.eta))
}

/// Displacement magnitude as a grayscale image, scaled so the largest magnitude is 1.
pub fn visualize_field(field: &VectorField) -> Result<Image> {
    let mag: Vec<f64> = field
        .dx
        .iter()
        .zip(&field.dy)
        .map(|(x, y)| x.hypot(*y))
        .collect();
    let max = mag.iter().copied().fold(0.0, f64::max);
    let data = if max > 0.0 {
        mag.into_iter().map(|m| m / max).collect()
    } else {
        vec![0.0; field.width * field.height]
    };
    Image::from_vec_clamped(field.width, field.height, 1, data)
}
