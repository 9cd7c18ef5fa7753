//! Defocus blur: Gaussian point-spread function plus additive sensor noise,
//! and the thin-lens blur-radius calculator.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::image_core::{convolve_gaussian, gaussian_kernel, ImageF};
use crate::stream::SeededStream;

/// Default additive noise level on the `[0, 1]` intensity scale.
pub const DEFAULT_NOISE_STD: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlurParams {
    pub r_b: f64,
    pub sigma_b: f64,
    pub noise_std: f64,
}

impl BlurParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.r_b >= 0.0) || !(self.sigma_b > 0.0) || !(self.noise_std >= 0.0) {
            return Err(Error::param(format!("blur needs r_b >= 0, sigma_b > 0, noise_std >= 0; got {self:?}")));
        }
        Ok(())
    }
}

/// Thin-lens optical configuration, all lengths in millimetres.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LensConfig {
    /// Focal length.
    pub focal_length: f64,
    /// f-number.
    pub f_number: f64,
    /// Object distance.
    pub object_distance: f64,
    /// Image distance.
    pub image_distance: f64,
}

/// Signed blur radius `(F * v0 - D * (F - v0)) / (D * f)`.
///
/// The sign tells which side of focus the object is on; use the magnitude
/// as a kernel radius.
pub fn blur_radius(lens: &LensConfig) -> Result<f64> {
    let LensConfig { focal_length: big_f, f_number: f, object_distance: d, image_distance: v0 } = *lens;
    let denom = d * f;
    if denom == 0.0 || !denom.is_finite() {
        return Err(Error::param(format!("object distance times f-number must be nonzero, got {denom}")));
    }
    Ok((big_f * v0 - d * (big_f - v0)) / denom)
}

/// `convolve(x, G(round(r_b), sigma_b)) + n` with `n ~ N(0, noise_std^2)`
/// drawn per sample from `stream`. No clamping.
pub fn apply_defocus(img: &ImageF, p: &BlurParams, stream: &mut SeededStream) -> Result<ImageF> {
    p.validate()?;
    let kernel = gaussian_kernel(p.r_b.round() as usize, p.sigma_b)?;
    let mut out = convolve_gaussian(img, &kernel);
    if p.noise_std > 0.0 {
        for v in out.data_mut() {
            *v += stream.normal(p.noise_std);
        }
    }
    Ok(out)
}

/// Samples blur parameters for an image of width `width`.
pub fn sample_blur(stream: &mut SeededStream, width: usize, noise_std: f64) -> BlurParams {
    let w = width as f64;
    BlurParams { r_b: stream.uniform(0.01 * w, 0.015 * w), sigma_b: 0.03 * w, noise_std }
}
