//! Synthetic atmospheric-turbulence degradation and restoration metrics.
//!
//! * [`imagebuf`]: float images and 8-bit PNG I/O.
//! * [`turbsim`]: Gaussian blur, random motion fields, backward warping and
//!   the composed [`degrade`](turbsim::degrade) operator.
//! * [`metrics`]: PSNR, SSIM, feature distance and dataset evaluation.
//! * [`datagen`]: reproducible quad datasets with a JSON Lines manifest.
//! * [`synth`]: procedural face-like test images.

pub mod datagen;
pub mod error;
pub mod imagebuf;
pub mod metrics;
pub mod rng;
pub mod synth;
pub mod turbsim;

pub use error::{Error, Result};
pub use imagebuf::{load_png, save_png, Image};
