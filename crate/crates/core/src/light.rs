//! Light transmission disturbance: a smoothed local illumination panel
//! (light leak or under-exposure) combined with global contrast, brightness
//! and saturation jitter.
//!
//! ```text
//! x' = clip_saturate(alpha * (panel + x) + beta; s)
//! panel_c(x, y) = smooth(n_l[c] * [(x - a)^2 + (y - b)^2 < r^2])
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::image_core::{clip_saturate, convolve_plane, gaussian_kernel, kernel_radius, ImageF};
use crate::stream::SeededStream;

/// The three light-leak tints.
pub const LIGHT_LEAK_BIASES: [[f64; 3]; 3] = [[0.63, 0.80, 0.35], [0.56, 0.93, 0.93], [1.0, 1.0, 1.0]];

/// Floor on the light-leak smoothing spread, as a fraction of the image width.
pub const LEAK_SIGMA_FLOOR: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GlobalToneParams {
    pub alpha: f64,
    pub beta: f64,
    pub s: f64,
}

impl GlobalToneParams {
    pub const NEUTRAL: GlobalToneParams = GlobalToneParams { alpha: 1.0, beta: 0.0, s: 1.0 };

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0) || !(self.s >= 0.0) || !(-1.0..=1.0).contains(&self.beta) {
            return Err(Error::param(format!("global tone needs alpha > 0, s >= 0, beta in [-1, 1]; got {self:?}")));
        }
        Ok(())
    }
}

impl Default for GlobalToneParams {
    fn default() -> Self {
        Self::NEUTRAL
    }
}

/// Disc of radius `radius` at `center = (x, y)` carrying the RGB `bias`,
/// smoothed by a Gaussian of spread `sigma`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IlluminationPanelParams {
    pub center: (f64, f64),
    pub radius: f64,
    pub sigma: f64,
    pub bias: [f64; 3],
}

impl IlluminationPanelParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.radius > 0.0) || !(self.sigma > 0.0) || !self.center.0.is_finite() || !self.center.1.is_finite() {
            return Err(Error::param(format!("illumination panel needs radius > 0, sigma > 0; got {self:?}")));
        }
        if self.bias.iter().any(|b| !b.is_finite()) {
            return Err(Error::param("illumination bias must be finite"));
        }
        Ok(())
    }
}

/// Unit disc indicator (strict inequality), one plane.
pub(crate) fn disc_plane(width: usize, height: usize, center: (f64, f64), radius: f64) -> Vec<f64> {
    let r2 = radius * radius;
    let mut plane = vec![0.0; width * height];
    let (cx, cy) = center;
    // Only scan rows the disc can touch.
    let y_lo = ((cy - radius).floor().max(0.0)) as usize;
    let y_hi = ((cy + radius).ceil().min(height as f64 - 1.0)).max(-1.0);
    if y_hi < 0.0 || y_lo >= height {
        return plane;
    }
    for y in y_lo..=y_hi as usize {
        let dy = y as f64 - cy;
        for x in 0..width {
            let dx = x as f64 - cx;
            if dx * dx + dy * dy < r2 {
                plane[y * width + x] = 1.0;
            }
        }
    }
    plane
}

/// Unit disc smoothed by `G(round(min(3 sigma, max(w, h))), sigma)`.
pub(crate) fn smoothed_disc(
    width: usize,
    height: usize,
    center: (f64, f64),
    radius: f64,
    sigma: f64,
) -> Result<Vec<f64>> {
    let taps = kernel_radius((3.0 * sigma).min(width.max(height) as f64));
    let kernel = gaussian_kernel(taps, sigma)?;
    Ok(convolve_plane(&disc_plane(width, height, center, radius), width, height, &kernel))
}

/// Builds the signed, smoothed 3-channel illumination field.
pub fn build_panel(width: usize, height: usize, p: &IlluminationPanelParams) -> Result<ImageF> {
    p.validate()?;
    if width == 0 || height == 0 {
        return Err(Error::shape("panel dimensions must be positive"));
    }
    let base = smoothed_disc(width, height, p.center, p.radius, p.sigma)?;
    let mut data = Vec::with_capacity(3 * base.len());
    for bias in p.bias {
        data.extend(base.iter().map(|v| bias * v));
    }
    ImageF::new(width, height, 3, data)
}

/// `clip_saturate(alpha * (panel + x) + beta; s)`, clamped once at the end.
pub fn apply_light_disturbance(img: &ImageF, panel: &ImageF, tone: &GlobalToneParams) -> Result<ImageF> {
    img.check_same_shape(panel, "illumination panel does not match image")?;
    let GlobalToneParams { alpha, beta, s } = *tone;
    let mut out = img.clone();
    for (v, p) in out.data_mut().iter_mut().zip(panel.data()) {
        *v = alpha * (p + *v) + beta;
    }
    Ok(clip_saturate(&out, s))
}

fn jitter_tone(stream: &mut SeededStream) -> GlobalToneParams {
    let alpha = stream.uniform(0.5, 1.5);
    let beta = stream.uniform(-0.5, 0.5);
    let s = stream.uniform(0.5, 1.5);
    GlobalToneParams { alpha, beta, s }
}

/// Samples a light-leak panel and its jittered global tone for an image of
/// width `width`.
pub fn sample_light_leak(stream: &mut SeededStream, width: usize) -> (IlluminationPanelParams, GlobalToneParams) {
    let w = width as f64;
    let radius = stream.uniform(0.75 * w, w);
    let a = stream.uniform(0.375 * radius, 0.625 * radius);
    let b = stream.uniform(0.375 * radius, 0.625 * radius);
    let sigma = stream.uniform_ordered(
        (0.66 * a.min(b)).max(LEAK_SIGMA_FLOOR * w),
        (0.66 * (w - a.max(b))).max(LEAK_SIGMA_FLOOR * w),
    );
    let bias = *stream.choose(&LIGHT_LEAK_BIASES);
    let tone = jitter_tone(stream);
    (IlluminationPanelParams { center: (a, b), radius, sigma, bias }, tone)
}

/// Samples a darkening panel with neutral global tone.
pub fn sample_uneven_exposure(stream: &mut SeededStream, width: usize) -> (IlluminationPanelParams, GlobalToneParams) {
    let w = width as f64;
    let radius = stream.uniform(0.3 * w, 0.5 * w);
    let sigma = stream.uniform(0.55 * radius, 0.75 * radius);
    let u = stream.uniform(-0.5, -0.1);
    let a = stream.uniform(0.25 * w, 0.75 * w);
    let b = stream.uniform(0.25 * w, 0.75 * w);
    (IlluminationPanelParams { center: (a, b), radius, sigma, bias: [u; 3] }, GlobalToneParams::NEUTRAL)
}

impl SeededStream {
    /// Uniform between two bounds given in either order.
    pub(crate) fn uniform_ordered(&mut self, a: f64, b: f64) -> f64 {
        self.uniform(a.min(b), a.max(b))
    }
}
