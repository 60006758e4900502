//! Float raster images and 8-bit PNG I/O.
//!
//! Samples live in `[0, 1]` as `f64`, row-major with interleaved channels.
//! Quantization to 8 bits happens only at the file boundary.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};

/// A `width × height × channels` raster with samples in `[0, 1]`.
///
/// Channel count is 1 (grayscale) or 3 (RGB). Images are never promoted
/// between the two by any operation in this crate.
#[derive(Clone, Debug, PartialEq)]
pub struct Image {
    width: usize,
    height: usize,
    channels: usize,
    data: Vec<f64>,
}

impl Image {
    /// Builds an image from raw samples, rejecting anything outside `[0, 1]`.
    pub fn new(width: usize, height: usize, channels: usize, data: Vec<f64>) -> Result<Self> {
        Self::check_shape(width, height, channels, data.len())?;
        if let Some(bad) = data.iter().find(|s| !(0.0..=1.0).contains(*s)) {
            return Err(Error::InvalidImage(format!("sample {bad} outside [0, 1]")));
        }
        Ok(Image {
            width,
            height,
            channels,
            data,
        })
    }

    /// Builds an image, clamping every sample into `[0, 1]`. NaN is rejected.
    pub fn from_vec_clamped(
        width: usize,
        height: usize,
        channels: usize,
        mut data: Vec<f64>,
    ) -> Result<Self> {
        Self::check_shape(width, height, channels, data.len())?;
        for s in &mut data {
            if s.is_nan() {
                return Err(Error::InvalidImage("NaN sample".into()));
            }
            *s = s.clamp(0.0, 1.0);
        }
        Ok(Image {
            width,
            height,
            channels,
            data,
        })
    }

    /// Constant image.
    pub fn filled(width: usize, height: usize, channels: usize, value: f64) -> Result<Self> {
        let len = width * height * channels;
        Self::new(width, height, channels, vec![value; len])
    }

    /// Builds an image by evaluating `f(x, y, c)` for every sample; results are clamped.
    pub fn from_fn(
        width: usize,
        height: usize,
        channels: usize,
        mut f: impl FnMut(usize, usize, usize) -> f64,
    ) -> Result<Self> {
        let mut data = Vec::with_capacity(width * height * channels);
        for y in 0..height {
            for x in 0..width {
                for c in 0..channels {
                    data.push(f(x, y, c));
                }
            }
        }
        Self::from_vec_clamped(width, height, channels, data)
    }

    fn check_shape(width: usize, height: usize, channels: usize, len: usize) -> Result<()> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidImage(format!(
                "dimensions must be positive, got {width}x{height}"
            )));
        }
        if channels != 1 && channels != 3 {
            return Err(Error::InvalidImage(format!(
                "channel count must be 1 or 3, got {channels}"
            )));
        }
        if len != width * height * channels {
            return Err(Error::InvalidImage(format!(
                "expected {} samples for {width}x{height}x{channels}, got {len}",
                width * height * channels
            )));
        }
        Ok(())
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    /// Raw samples, row-major, channel-interleaved.
    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize, c: usize) -> f64 {
        self.data[(y * self.width + x) * self.channels + c]
    }

    /// `(width, height, channels)`.
    pub fn shape(&self) -> (usize, usize, usize) {
        (self.width, self.height, self.channels)
    }

    pub fn same_shape(&self, other: &Image) -> bool {
        self.shape() == other.shape()
    }

    pub(crate) fn ensure_same_shape(&self, other: &Image) -> Result<()> {
        if self.same_shape(other) {
            Ok(())
        } else {
            Err(Error::ShapeMismatch {
                left: self.shape_string(),
                right: other.shape_string(),
            })
        }
    }

    pub(crate) fn shape_string(&self) -> String {
        format!("{}x{}x{}", self.width, self.height, self.channels)
    }

    /// One channel as a dense `width × height` plane.
    pub fn plane(&self, c: usize) -> Vec<f64> {
        assert!(c < self.channels, "channel {c} out of range");
        self.data
            .iter()
            .skip(c)
            .step_by(self.channels)
            .copied()
            .collect()
    }

    /// Reassembles an image from per-channel planes, clamping into `[0, 1]`.
    pub fn from_planes(width: usize, height: usize, planes: &[Vec<f64>]) -> Result<Self> {
        let channels = planes.len();
        let mut data = vec![0.0; width * height * channels];
        for (c, plane) in planes.iter().enumerate() {
            if plane.len() != width * height {
                return Err(Error::InvalidImage(format!(
                    "plane {c} has {} samples, expected {}",
                    plane.len(),
                    width * height
                )));
            }
            for (i, &s) in plane.iter().enumerate() {
                data[i * channels + c] = s;
            }
        }
        Self::from_vec_clamped(width, height, channels, data)
    }

    /// Central `width × height` crop. Odd margins leave the extra pixel on the right/bottom.
    pub fn center_crop(&self, width: usize, height: usize) -> Result<Image> {
        if width > self.width || height > self.height {
            return Err(Error::InvalidImage(format!(
                "cannot crop {}x{} to {width}x{height}",
                self.width, self.height
            )));
        }
        let x0 = (self.width - width) / 2;
        let y0 = (self.height - height) / 2;
        let mut data = Vec::with_capacity(width * height * self.channels);
        for y in y0..y0 + height {
            let start = (y * self.width + x0) * self.channels;
            data.extend_from_slice(&self.data[start..start + width * self.channels]);
        }
        Image::new(width, height, self.channels, data)
    }

    /// The image as it would read back after [`save_png`]: every sample
    /// snapped to the nearest multiple of 1/255.
    pub fn quantized(&self) -> Image {
        let data = self
            .data
            .iter()
            .map(|&s| quantize_sample(s) as f64 / 255.0)
            .collect();
        Image {
            width: self.width,
            height: self.height,
            channels: self.channels,
            data,
        }
    }

    /// 8-bit samples as written by [`save_png`].
    pub fn to_bytes(&self) -> Vec<u8> {
        self.data.iter().map(|&s| quantize_sample(s)).collect()
    }
}

/// Clamp to `[0, 1]` and round half up to an 8-bit code.
#[inline]
pub fn quantize_sample(s: f64) -> u8 {
    (s.clamp(0.0, 1.0) * 255.0 + 0.5).floor() as u8
}

/// Reads an 8- or 16-bit grayscale or RGB PNG.
pub fn load_png(path: impl AsRef<Path>) -> Result<Image> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let decode_err = |e: png::DecodingError| Error::PngDecode {
        path: path.to_path_buf(),
        message: e.to_string(),
    };
    let mut reader = png::Decoder::new(BufReader::new(file))
        .read_info()
        .map_err(decode_err)?;

    let (color, depth) = {
        let info = reader.info();
        (info.color_type, info.bit_depth)
    };
    let channels = match color {
        png::ColorType::Grayscale => 1,
        png::ColorType::Rgb => 3,
        other => {
            return Err(Error::UnsupportedLayout {
                path: path.to_path_buf(),
                layout: format!("{other:?}"),
            })
        }
    };
    if !matches!(depth, png::BitDepth::Eight | png::BitDepth::Sixteen) {
        return Err(Error::UnsupportedBitDepth {
            path: path.to_path_buf(),
            depth: format!("{depth:?}"),
        });
    }

    let size = reader
        .output_buffer_size()
        .ok_or_else(|| Error::PngDecode {
            path: path.to_path_buf(),
            message: "image too large".into(),
        })?;
    let mut buf = vec![0u8; size];
    let frame = reader.next_frame(&mut buf).map_err(decode_err)?;
    let width = frame.width as usize;
    let height = frame.height as usize;
    let bytes = &buf[..frame.buffer_size()];
    let row_bytes = frame.line_size;

    let mut data = Vec::with_capacity(width * height * channels);
    for row in bytes.chunks_exact(row_bytes).take(height) {
        match depth {
            png::BitDepth::Eight => {
                data.extend(row[..width * channels].iter().map(|&b| b as f64 / 255.0))
            }
            _ => data.extend(
                row[..width * channels * 2]
                    .chunks_exact(2)
                    .map(|p| u16::from_be_bytes([p[0], p[1]]) as f64 / 65535.0),
            ),
        }
    }
    Image::new(width, height, channels, data)
}

/// Writes an 8-bit PNG with no ancillary chunks, so output bytes depend on the samples only.
pub fn save_png(img: &Image, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let bytes = encode_png(img).map_err(|message| Error::PngEncode {
        path: path.to_path_buf(),
        message,
    })?;
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    w.write_all(&bytes).map_err(|e| Error::io(path, e))?;
    w.flush().map_err(|e| Error::io(path, e))
}

/// Encodes to an in-memory 8-bit PNG.
pub fn encode_png(img: &Image) -> std::result::Result<Vec<u8>, String> {
    let mut out = Vec::new();
    {
        let mut encoder = png::Encoder::new(&mut out, img.width as u32, img.height as u32);
        encoder.set_color(if img.channels == 1 {
            png::ColorType::Grayscale
        } else {
            png::ColorType::Rgb
        });
        encoder.set_depth(png::BitDepth::Eight);
        let mut writer = encoder.write_header().map_err(|e| e.to_string())?;
        writer
            .write_image_data(&img.to_bytes())
            .map_err(|e| e.to_string())?;
        writer.finish().map_err(|e| e.to_string())?;
    }
    Ok(out)
}
