use super::field::VectorField;
use crate::error::{Error, Result};
use crate::imagebuf::Image;

/// Backward warp: `out(x, y) = img(x − dx, y − dy)` by bilinear interpolation,
/// with the sampling position clamped to the image rectangle.
pub fn warp(img: &Image, field: &VectorField) -> Result<Image> {
    let (w, h, ch) = img.shape();
    if field.width() != w || field.height() != h {
        return Err(Error::ShapeMismatch {
            left: img.shape_string(),
            right: format!("field {}x{}", field.width(), field.height()),
        });
    }
    let src = img.data();
    let (xmax, ymax) = ((w - 1) as f64, (h - 1) as f64);
    let mut out = vec![0.0; src.len()];
    for y in 0..h {
        for x in 0..w {
            let (dx, dy) = field.at(x, y);
            let sx = (x as f64 - dx).clamp(0.0, xmax);
            let sy = (y as f64 - dy).clamp(0.0, ymax);
            let x0 = sx.floor() as usize;
            let y0 = sy.floor() as usize;
            let x1 = (x0 + 1).min(w - 1);
            let y1 = (y0 + 1).min(h - 1);
            let fx = sx - x0 as f64;
            let fy = sy - y0 as f64;
            let base = (y * w + x) * ch;
            for c in 0..ch {
                let p = |xx: usize, yy: usize| src[(yy * w + xx) * ch + c];
                let top = p(x0, y0) + fx * (p(x1, y0) - p(x0, y0));
                let bottom = p(x0, y1) + fx * (p(x1, y1) - p(x0, y1));
                out[base + c] = top + fy * (bottom - top);
            }
        }
    }
    Image::from_vec_clamped(w, h, ch, out)
}
