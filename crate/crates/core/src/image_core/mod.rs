//! Floating-point image containers, 8-bit codecs, Gaussian kernels and
//! separable convolution.
//!
//! All degradation math runs on `f64` intensities nominally in `[0, 1]`;
//! conversion to 8 bits happens only when reading or writing files.

mod codec;
mod convolve;
mod kernel;

pub use codec::{decode_image, encode_image, encode_mask, load_image, write_atomic};
pub use convolve::{convolve_gaussian, convolve_plane, reflect_index};
pub use kernel::{gaussian_kernel, kernel_radius, GaussianKernel};

use crate::error::{Error, Result};

/// Rec. 601 luma weights.
pub const LUMA_WEIGHTS: [f64; 3] = [0.299, 0.587, 0.114];

/// Planar (channel-major) floating-point image.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageF {
    width: usize,
    height: usize,
    channels: usize,
    data: Vec<f64>,
}

impl ImageF {
    pub fn new(width: usize, height: usize, channels: usize, data: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 || channels == 0 {
            return Err(Error::shape(format!("empty image {width}x{height}x{channels}")));
        }
        if data.len() != width * height * channels {
            return Err(Error::shape(format!(
                "buffer of {} values does not match {width}x{height}x{channels}",
                data.len()
            )));
        }
        Ok(Self { width, height, channels, data })
    }

    /// # Panics
    /// If any dimension is zero.
    pub fn filled(width: usize, height: usize, channels: usize, value: f64) -> Self {
        assert!(width > 0 && height > 0 && channels > 0, "image dimensions must be positive");
        Self { width, height, channels, data: vec![value; width * height * channels] }
    }

    pub fn zeros(width: usize, height: usize, channels: usize) -> Self {
        Self::filled(width, height, channels, 0.0)
    }

    /// Builds an image by evaluating `f(channel, x, y)` at every sample.
    pub fn from_fn(
        width: usize,
        height: usize,
        channels: usize,
        mut f: impl FnMut(usize, usize, usize) -> f64,
    ) -> Self {
        let mut img = Self::zeros(width, height, channels);
        for c in 0..channels {
            for y in 0..height {
                for x in 0..width {
                    img.data[(c * height + y) * width + x] = f(c, x, y);
                }
            }
        }
        img
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

    pub fn dims(&self) -> (usize, usize, usize) {
        (self.width, self.height, self.channels)
    }

    pub fn plane_len(&self) -> usize {
        self.width * self.height
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    pub fn plane(&self, c: usize) -> &[f64] {
        let n = self.plane_len();
        &self.data[c * n..(c + 1) * n]
    }

    pub fn plane_mut(&mut self, c: usize) -> &mut [f64] {
        let n = self.plane_len();
        &mut self.data[c * n..(c + 1) * n]
    }

    #[inline]
    pub fn get(&self, c: usize, x: usize, y: usize) -> f64 {
        self.data[(c * self.height + y) * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, c: usize, x: usize, y: usize, v: f64) {
        self.data[(c * self.height + y) * self.width + x] = v;
    }

    pub fn same_shape(&self, other: &ImageF) -> bool {
        self.dims() == other.dims()
    }

    pub(crate) fn check_same_shape(&self, other: &ImageF, what: &str) -> Result<()> {
        if self.same_shape(other) {
            Ok(())
        } else {
            Err(Error::shape(format!(
                "{what}: {}x{}x{} vs {}x{}x{}",
                self.width, self.height, self.channels, other.width, other.height, other.channels
            )))
        }
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> ImageF {
        ImageF {
            width: self.width,
            height: self.height,
            channels: self.channels,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn clamp01(&self) -> ImageF {
        self.map(|v| v.clamp(0.0, 1.0))
    }

    pub fn min_value(&self) -> f64 {
        self.data.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_value(&self) -> f64 {
        self.data.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn mean(&self) -> f64 {
        self.data.iter().sum::<f64>() / self.data.len() as f64
    }

    /// Resamples to `width x height` with a triangle filter.
    pub fn resize(&self, width: usize, height: usize) -> Result<ImageF> {
        if width == 0 || height == 0 {
            return Err(Error::param(format!("cannot resize to {width}x{height}")));
        }
        if (width, height) == (self.width, self.height) {
            return Ok(self.clone());
        }
        let mut out = ImageF::zeros(width, height, self.channels);
        for c in 0..self.channels {
            let plane: Vec<f32> = self.plane(c).iter().map(|&v| v as f32).collect();
            let buf = image::ImageBuffer::<image::Luma<f32>, _>::from_raw(self.width as u32, self.height as u32, plane)
                .expect("plane length matches dimensions");
            let resized =
                image::imageops::resize(&buf, width as u32, height as u32, image::imageops::FilterType::Triangle);
            for (dst, src) in out.plane_mut(c).iter_mut().zip(resized.into_raw()) {
                *dst = f64::from(src);
            }
        }
        Ok(out)
    }
}

/// Single-channel floating-point map in `[0, 1]`, used for artifact masks.
#[derive(Debug, Clone, PartialEq)]
pub struct MaskF(ImageF);

impl MaskF {
    pub fn new(width: usize, height: usize, data: Vec<f64>) -> Result<Self> {
        ImageF::new(width, height, 1, data).map(MaskF)
    }

    pub fn filled(width: usize, height: usize, value: f64) -> Self {
        MaskF(ImageF::filled(width, height, 1, value))
    }

    pub fn zeros(width: usize, height: usize) -> Self {
        Self::filled(width, height, 0.0)
    }

    pub fn width(&self) -> usize {
        self.0.width
    }

    pub fn height(&self) -> usize {
        self.0.height
    }

    pub fn data(&self) -> &[f64] {
        &self.0.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.0.data
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.0.get(0, x, y)
    }

    pub fn is_all_zero(&self) -> bool {
        self.0.data.iter().all(|&v| v == 0.0)
    }

    pub fn as_image(&self) -> &ImageF {
        &self.0
    }

    pub fn into_image(self) -> ImageF {
        self.0
    }
}

impl TryFrom<ImageF> for MaskF {
    type Error = Error;

    fn try_from(img: ImageF) -> Result<Self> {
        if img.channels != 1 {
            return Err(Error::UnsupportedLayout(img.channels));
        }
        Ok(MaskF(img))
    }
}

/// Luminance-anchored saturation followed by a clamp to `[0, 1]`.
///
/// Each channel moves away from (or toward) the pixel's Rec. 601 luma by the
/// factor `s`; `s = 0` yields grayscale and `s = 1` leaves colors untouched.
pub fn clip_saturate(img: &ImageF, s: f64) -> ImageF {
    let mut out = img.clone();
    if img.channels == 3 && s != 1.0 {
        let n = img.plane_len();
        let (r, rest) = out.data.split_at_mut(n);
        let (g, b) = rest.split_at_mut(n);
        for i in 0..n {
            let luma = LUMA_WEIGHTS[0] * r[i] + LUMA_WEIGHTS[1] * g[i] + LUMA_WEIGHTS[2] * b[i];
            r[i] = luma + s * (r[i] - luma);
            g[i] = luma + s * (g[i] - luma);
            b[i] = luma + s * (b[i] - luma);
        }
    }
    for v in &mut out.data {
        *v = v.clamp(0.0, 1.0);
    }
    out
}
