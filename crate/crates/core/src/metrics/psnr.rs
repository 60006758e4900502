use crate::error::Result;
use crate::imagebuf::Image;

/// Mean squared error over every sample of every channel.
pub fn mse(a: &Image, b: &Image) -> Result<f64> {
    a.ensure_same_shape(b)?;
    let sum: f64 = a
        .data()
        .iter()
        .zip(b.data())
        .map(|(x, y)| (x - y) * (x - y))
        .sum();
    Ok(sum / a.data().len() as f64)
}

/// Peak signal-to-noise ratio in dB with peak value 1.0.
///
/// Identical images have zero error; the result is then `f64::INFINITY`,
/// which callers treat as the "maximal" sentinel.
pub fn psnr(a: &Image, b: &Image) -> Result<f64> {
    let mse = mse(a, b)?;
    if mse == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(10.0 * (1.0 / mse).log10())
}
