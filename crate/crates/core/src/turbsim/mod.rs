//! Turbulence degradation operators.
//!
//! The observed image is modeled as a blurred and randomly deformed copy of
//! the clean image plus sensor noise. Blur `H` is a space-invariant Gaussian
//! ([`gaussian_blur`]); deformation `D` is a backward [`warp`] along a random
//! motion field built by summing `M` small smoothed-noise patches
//! ([`accumulate_field`]). Since the order in which blur and deformation act
//! is unknown, [`Order`] makes it explicit per image.

mod field;
mod kernel;
mod warp;

pub use field::{accumulate_field, patch_field, visualize_field, VectorField};
pub use kernel::{gaussian_blur, gaussian_kernel, three_sigma_radius, Kernel1D};
pub use warp::warp;

use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::imagebuf::Image;
use crate::rng::{stream, Stream};

/// Composition order of blur and deformation in the distorted image.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Order {
    /// `warp(blur(I))`
    #[serde(rename = "blur-warp")]
    BlurThenWarp,
    /// `blur(warp(I))`
    #[serde(rename = "warp-blur")]
    WarpThenBlur,
}

impl Order {
    pub const ALL: [Order; 2] = [Order::BlurThenWarp, Order::WarpThenBlur];

    pub fn as_str(self) -> &'static str {
        match self {
            Order::BlurThenWarp => "blur-warp",
            Order::WarpThenBlur => "warp-blur",
        }
    }
}

impl std::fmt::Display for Order {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Order {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "blur-warp" => Ok(Order::BlurThenWarp),
            "warp-blur" => Ok(Order::WarpThenBlur),
            other => Err(Error::InvalidParameter(format!("unknown order {other:?}"))),
        }
    }
}

/// Everything needed to reproduce one degraded quad.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegradationParams {
    /// Field strength, scales both displacement components.
    pub eta: f64,
    /// Side of each random patch, in pixels.
    pub patch_n: usize,
    /// Std of the Gaussian smoothing the patch noise, in pixels.
    pub field_sigma: f64,
    /// Number of patches summed into the field.
    pub m_points: usize,
    /// Blur std, in pixels. Zero disables blur.
    pub blur_sigma: f64,
    /// Std of additive Gaussian noise, in sample units.
    pub noise_sigma: f64,
    pub order: Order,
    pub seed: u64,
}

impl Default for DegradationParams {
    /// Field settings used for 112×112 faces (`η = 0.13, N = 4, σ = 16`),
    /// the heaviest deformation setting `M = 10000`, blur std 1, no noise.
    fn default() -> Self {
        DegradationParams {
            eta: 0.13,
            patch_n: 4,
            field_sigma: 16.0,
            m_points: 10_000,
            blur_sigma: 1.0,
            noise_sigma: 0.0,
            order: Order::BlurThenWarp,
            seed: 0,
        }
    }
}

impl DegradationParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::InvalidParameter(what.to_string()));
        if !self.eta.is_finite() || self.eta < 0.0 {
            return bad("eta must be finite and >= 0");
        }
        if self.patch_n < 1 {
            return bad("patch_n must be >= 1");
        }
        if !self.field_sigma.is_finite() || self.field_sigma <= 0.0 {
            return bad("field_sigma must be finite and > 0");
        }
        if !self.blur_sigma.is_finite() || self.blur_sigma < 0.0 {
            return bad("blur_sigma must be finite and >= 0");
        }
        if !self.noise_sigma.is_finite() || self.noise_sigma < 0.0 {
            return bad("noise_sigma must be finite and >= 0");
        }
        Ok(())
    }
}

/// Clean image with its blurred-only, deformed-only and fully distorted versions.
#[derive(Clone, Debug, PartialEq)]
pub struct DegradedQuad {
    pub clean: Image,
    pub blurred: Image,
    pub deformed: Image,
    pub distorted: Image,
    pub params: DegradationParams,
}

/// Produces the blurred, deformed and distorted versions of `img`.
///
/// The blur and the motion field are drawn once and shared: `blurred` is
/// `H(I)`, `deformed` is `D(I)`, and `distorted` composes the same `H` and `D`
/// in `params.order`, adds noise and clamps to `[0, 1]`.
pub fn degrade(img: &Image, params: &DegradationParams) -> Result<DegradedQuad> {
    params.validate()?;
    let (w, h, ch) = img.shape();
    if w < params.patch_n || h < params.patch_n {
        return Err(Error::ImageTooSmall {
            width: w,
            height: h,
            required: params.patch_n,
        });
    }

    let field = accumulate_field(w, h, params, &mut stream(params.seed, Stream::Field))?;
    let blurred = gaussian_blur(img, params.blur_sigma)?;
    let deformed = warp(img, &field)?;
    let composed = match params.order {
        Order::BlurThenWarp => warp(&blurred, &field)?,
        Order::WarpThenBlur => gaussian_blur(&deformed, params.blur_sigma)?,
    };
    let distorted = if params.noise_sigma > 0.0 {
        let normal = Normal::new(0.0, params.noise_sigma)
            .map_err(|e| Error::InvalidParameter(e.to_string()))?;
        let mut rng = stream(params.seed, Stream::Noise);
        let noisy = composed
            .data()
            .iter()
            .map(|s| s + normal.sample(&mut rng))
            .collect();
        Image::from_vec_clamped(w, h, ch, noisy)?
    } else {
        composed
    };

    Ok(DegradedQuad {
        clean: img.clone(),
        blurred,
        deformed,
        distorted,
        params: params.clone(),
    })
}
