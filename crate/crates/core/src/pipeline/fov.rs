use serde::{Deserialize, Serialize};

use crate::artifact::PlacementRegion;
use crate::image_core::ImageF;

/// Foreground threshold on the per-pixel channel mean.
pub const FOV_THRESHOLD: f64 = 0.03;
/// Minimum foreground fraction before falling back to the full image.
pub const FOV_MIN_FRACTION: f64 = 0.05;
/// Random centers must lie within this fraction of the FOV radius.
pub const PLACEMENT_FRACTION: f64 = 0.9;

/// Circular field of view of a fundus photograph.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FovMask {
    #[serde(rename = "cx")]
    pub center_x: f64,
    #[serde(rename = "cy")]
    pub center_y: f64,
    #[serde(rename = "r")]
    pub radius: f64,
}

impl FovMask {
    pub fn center(&self) -> (f64, f64) {
        (self.center_x, self.center_y)
    }

    /// Region where artifacts and illumination panels may be centered.
    pub fn placement(&self, width: usize, height: usize) -> PlacementRegion {
        PlacementRegion { center: self.center(), radius: PLACEMENT_FRACTION * self.radius, width, height }
    }

    fn full_image(width: usize, height: usize) -> Self {
        let (w, h) = (width as f64, height as f64);
        FovMask { center_x: (w - 1.0) / 2.0, center_y: (h - 1.0) / 2.0, radius: 0.5 * w.hypot(h) }
    }
}

/// Thresholds the channel mean, takes the foreground centroid as center and
/// `1.02 x` the 99th-percentile centroid distance as radius. Falls back to the
/// circle through the image corners when under 5% of pixels are foreground.
pub fn detect_fov(img: &ImageF) -> FovMask {
    let (w, h, ch) = img.dims();
    let n = w * h;
    let mut fg = Vec::new();
    for y in 0..h {
        for x in 0..w {
            let i = y * w + x;
            let mean = (0..ch).map(|c| img.data()[c * n + i]).sum::<f64>() / ch as f64;
            if mean > FOV_THRESHOLD {
                fg.push((x as f64, y as f64));
            }
        }
    }
    if (fg.len() as f64) < FOV_MIN_FRACTION * n as f64 || fg.is_empty() {
        return FovMask::full_image(w, h);
    }
    let count = fg.len() as f64;
    let cx = fg.iter().map(|p| p.0).sum::<f64>() / count;
    let cy = fg.iter().map(|p| p.1).sum::<f64>() / count;
    let mut dist: Vec<f64> = fg.iter().map(|p| (p.0 - cx).hypot(p.1 - cy)).collect();
    let k = ((0.99 * count).ceil() as usize).clamp(1, dist.len()) - 1;
    let (_, p99, _) = dist.select_nth_unstable_by(k, f64::total_cmp);
    let radius = (1.02 * *p99).max(1.0);
    FovMask { center_x: cx, center_y: cy, radius }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn black_image_falls_back() {
        let fov = detect_fov(&ImageF::zeros(100, 60, 3));
        assert_eq!(fov.center(), (49.5, 29.5));
        assert!((fov.radius - 0.5 * (100f64).hypot(60.0)).abs() < 1e-12);
    }

    #[test]
    fn white_image_is_centered() {
        let fov = detect_fov(&ImageF::filled(80, 64, 3, 1.0));
        assert!((fov.center_x - 39.5).abs() <= 1.0 && (fov.center_y - 31.5).abs() <= 1.0);
    }

    #[test]
    fn finds_disc() {
        let img =
            ImageF::from_fn(
                512,
                512,
                3,
                |_, x, y| {
                    if (x as f64 - 256.0).hypot(y as f64 - 256.0) <= 200.0 {
                        1.0
                    } else {
                        0.0
                    }
                },
            );
        let fov = detect_fov(&img);
        assert!((fov.center_x - 256.0).abs() <= 2.0 && (fov.center_y - 256.0).abs() <= 2.0);
        assert!((fov.radius - 204.0).abs() <= 6.0, "{}", fov.radius);
    }

    #[test]
    fn tiny_foreground_falls_back() {
        let img = ImageF::from_fn(100, 100, 3, |_, x, y| if x < 5 && y < 5 { 1.0 } else { 0.0 });
        assert_eq!(detect_fov(&img).center(), (49.5, 49.5));
    }
}
