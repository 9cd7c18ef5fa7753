//! Lens-dust artifacts: each one is a hard disc of radius `r_k / 4`
//! defocused by a Gaussian of spread `sigma_k` and scaled by a luminance
//! bias `o_k`, added on top of the image.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::image_core::{ImageF, MaskF};
use crate::light::smoothed_disc;
use crate::stream::SeededStream;

/// Fewest and most artifacts per image.
pub const ARTIFACT_COUNT_RANGE: (u64, u64) = (10, 25);

/// Ground-truth mask radius is `r_k / 4 + MASK_DILATION_SIGMAS * sigma_k`.
pub const MASK_DILATION_SIGMAS: f64 = 2.0;

const PLACEMENT_ATTEMPTS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArtifactSpec {
    pub center: (f64, f64),
    pub r_k: f64,
    pub sigma_k: f64,
    /// Luminance bias, applied identically to every channel.
    pub o_k: f64,
}

impl ArtifactSpec {
    /// Builds a spec with `sigma_k` and `o_k` derived from the object radius.
    pub fn from_radius(center: (f64, f64), r_k: f64) -> Self {
        Self { center, r_k, sigma_k: artifact_sigma(r_k), o_k: artifact_bias(r_k) }
    }

    pub fn disc_radius(&self) -> f64 {
        self.r_k / 4.0
    }

    pub fn mask_radius(&self) -> f64 {
        self.disc_radius() + MASK_DILATION_SIGMAS * self.sigma_k
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.r_k > 0.0) || !(self.sigma_k > 0.0) || !(self.o_k.abs() <= 1.0) {
            return Err(Error::param(format!("artifact needs r_k > 0, sigma_k > 0, |o_k| <= 1; got {self:?}")));
        }
        if !self.center.0.is_finite() || !self.center.1.is_finite() {
            return Err(Error::param("artifact center must be finite"));
        }
        Ok(())
    }
}

/// Defocus spread `5 + 0.8 r`, in pixels at the sampled resolution.
pub fn artifact_sigma(r_k: f64) -> f64 {
    5.0 + 0.8 * r_k
}

/// Luminance bias `1 - exp(-(0.5 + 0.04 r)(0.012 r))`.
pub fn artifact_bias(r_k: f64) -> f64 {
    1.0 - (-(0.5 + 0.04 * r_k) * (0.012 * r_k)).exp()
}

/// Region where random centers may land: a circle clipped to the image.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlacementRegion {
    pub center: (f64, f64),
    pub radius: f64,
    pub width: usize,
    pub height: usize,
}

impl PlacementRegion {
    /// The whole image (circle through the corners).
    pub fn full(width: usize, height: usize) -> Self {
        let (w, h) = (width as f64, height as f64);
        Self { center: ((w - 1.0) / 2.0, (h - 1.0) / 2.0), radius: 0.5 * w.hypot(h), width, height }
    }

    pub fn contains(&self, p: (f64, f64)) -> bool {
        let inside_image =
            p.0 >= 0.0 && p.1 >= 0.0 && p.0 <= (self.width - 1) as f64 && p.1 <= (self.height - 1) as f64;
        inside_image && (p.0 - self.center.0).hypot(p.1 - self.center.1) <= self.radius
    }

    /// Uniform over the region by rejection from its bounding box; after 100
    /// misses the region center is returned.
    pub fn sample(&self, stream: &mut SeededStream) -> (f64, f64) {
        let x0 = (self.center.0 - self.radius).max(0.0);
        let x1 = (self.center.0 + self.radius).min((self.width - 1) as f64);
        let y0 = (self.center.1 - self.radius).max(0.0);
        let y1 = (self.center.1 + self.radius).min((self.height - 1) as f64);
        if x0 <= x1 && y0 <= y1 {
            for _ in 0..PLACEMENT_ATTEMPTS {
                let p = (stream.uniform(x0, x1), stream.uniform(y0, y1));
                if self.contains(p) {
                    return p;
                }
            }
        }
        self.center
    }
}

/// Single-channel signed layer `o_k * smooth(disc(r_k / 4))`.
pub fn render_artifact_layer(width: usize, height: usize, spec: &ArtifactSpec) -> Result<MaskF> {
    spec.validate()?;
    if width == 0 || height == 0 {
        return Err(Error::shape("artifact layer dimensions must be positive"));
    }
    let mut layer = smoothed_disc(width, height, spec.center, spec.disc_radius(), spec.sigma_k)?;
    for v in &mut layer {
        *v *= spec.o_k;
    }
    MaskF::new(width, height, layer)
}

/// `x + sum_k layer_k`, accumulated in list order, without clamping.
pub fn apply_artifacts(img: &ImageF, specs: &[ArtifactSpec]) -> Result<ImageF> {
    let mut out = img.clone();
    let (w, h, ch) = img.dims();
    for spec in specs {
        let layer = render_artifact_layer(w, h, spec)?;
        for c in 0..ch {
            for (v, l) in out.plane_mut(c).iter_mut().zip(layer.data()) {
                *v += l;
            }
        }
    }
    Ok(out)
}

/// Samples `K` artifacts with centers drawn from `region`.
pub fn sample_artifacts(stream: &mut SeededStream, width: usize, region: &PlacementRegion) -> Vec<ArtifactSpec> {
    let w = width as f64;
    let count = stream.uniform_int(ARTIFACT_COUNT_RANGE.0, ARTIFACT_COUNT_RANGE.1);
    (0..count)
        .map(|_| {
            let r_k = stream.uniform(0.025 * w, 0.05 * w);
            let center = region.sample(stream);
            ArtifactSpec::from_radius(center, r_k)
        })
        .collect()
}

/// Binary mask: 1 within `r_k / 4 + 2 sigma_k` of any artifact center.
pub fn ground_truth_mask(width: usize, height: usize, specs: &[ArtifactSpec]) -> Result<MaskF> {
    let mut mask = MaskF::zeros(width, height);
    for spec in specs {
        spec.validate()?;
        let (cx, cy) = spec.center;
        let r = spec.mask_radius();
        let y0 = (cy - r).floor().max(0.0) as usize;
        let y1 = (cy + r).ceil().min(height as f64 - 1.0);
        let x0 = (cx - r).floor().max(0.0) as usize;
        let x1 = (cx + r).ceil().min(width as f64 - 1.0);
        if y1 < 0.0 || x1 < 0.0 {
            continue;
        }
        for y in y0..=y1 as usize {
            for x in x0..=x1 as usize {
                if (x as f64 - cx).powi(2) + (y as f64 - cy).powi(2) < r * r {
                    mask.data_mut()[y * width + x] = 1.0;
                }
            }
        }
    }
    Ok(mask)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::image_core::{gaussian_kernel, kernel_radius, reflect_index};
    use proptest::prelude::*;

    fn textured(w: usize, h: usize, seed: u64) -> ImageF {
        let mut s = SeededStream::from_seed(seed);
        ImageF::from_fn(w, h, 3, |_, _, _| 0.2 + 0.6 * s.unit())
    }

    /// Direct disc rasterization and 2-D convolution at a single pixel.
    fn brute_layer_at(w: usize, h: usize, spec: &ArtifactSpec, x: usize, y: usize) -> f64 {
        let taps = kernel_radius((3.0 * spec.sigma_k).min(w.max(h) as f64));
        let k = gaussian_kernel(taps, spec.sigma_k).unwrap();
        let r = taps as isize;
        let rho = spec.r_k / 4.0;
        let mut acc = 0.0;
        for dy in -r..=r {
            for dx in -r..=r {
                let sx = reflect_index(x as isize + dx, w) as f64;
                let sy = reflect_index(y as isize + dy, h) as f64;
                if (sx - spec.center.0).powi(2) + (sy - spec.center.1).powi(2) < rho * rho {
                    acc += k.weights()[(dx + r) as usize] * k.weights()[(dy + r) as usize];
                }
            }
        }
        acc * spec.o_k
    }

    #[test]
    fn zero_bias_layer_is_zero() {
        let spec = ArtifactSpec { center: (10.0, 10.0), r_k: 12.0, sigma_k: 3.0, o_k: 0.0 };
        assert!(render_artifact_layer(32, 32, &spec).unwrap().is_all_zero());
    }

    #[test]
    fn covering_disc_gives_constant_layer() {
        let spec = ArtifactSpec { center: (5.0, 5.0), r_k: 400.0, sigma_k: 2.0, o_k: 0.3 };
        let layer = render_artifact_layer(12, 12, &spec).unwrap();
        assert!(layer.data().iter().all(|v| (v - 0.3).abs() < 1e-12));
    }

    #[test]
    fn layer_profile_matches_oracle() {
        let spec = ArtifactSpec { center: (32.0, 32.0), r_k: 16.0, sigma_k: 2.0, o_k: 0.5 };
        let layer = render_artifact_layer(64, 64, &spec).unwrap();
        // 45-pixel disc of radius 4 under a 13-tap sigma-2 Gaussian.
        assert!((layer.get(32, 32) - 0.41846).abs() < 1e-4, "{}", layer.get(32, 32));
        assert!(layer.get(60, 60) < 1e-4);
        for &(x, y) in &[(32, 32), (35, 30), (40, 40), (60, 60)] {
            assert!((layer.get(x, y) - brute_layer_at(64, 64, &spec, x, y)).abs() < 1e-12);
        }
    }

    #[test]
    fn invalid_spec_rejected() {
        let bad = ArtifactSpec { center: (1.0, 1.0), r_k: 4.0, sigma_k: 1.0, o_k: 1.5 };
        assert!(render_artifact_layer(8, 8, &bad).is_err());
        assert!(ground_truth_mask(8, 8, &[bad]).is_err());
        assert!(apply_artifacts(&ImageF::zeros(8, 8, 3), &[ArtifactSpec { r_k: -1.0, ..bad }]).is_err());
    }

    #[test]
    fn empty_list_is_identity() {
        let img = textured(16, 16, 2);
        assert_eq!(apply_artifacts(&img, &[]).unwrap(), img);
        assert!(ground_truth_mask(16, 16, &[]).unwrap().is_all_zero());
    }

    #[test]
    fn positive_bias_only_brightens() {
        let img = textured(48, 48, 3);
        let spec = ArtifactSpec { center: (20.0, 24.0), r_k: 20.0, sigma_k: 4.0, o_k: 0.4 };
        let out = apply_artifacts(&img, &[spec]).unwrap();
        assert!(out.data().iter().zip(img.data()).all(|(o, i)| o >= i));
    }

    #[test]
    fn disjoint_artifacts_stay_local() {
        let img = textured(96, 64, 4);
        let specs = [
            ArtifactSpec { center: (15.0, 15.0), r_k: 16.0, sigma_k: 2.0, o_k: 0.6 },
            ArtifactSpec { center: (75.0, 45.0), r_k: 20.0, sigma_k: 2.5, o_k: 0.5 },
        ];
        let out = apply_artifacts(&img, &specs).unwrap();
        for y in 0..64 {
            for x in 0..96 {
                let near = specs
                    .iter()
                    .any(|s| (x as f64 - s.center.0).hypot(y as f64 - s.center.1) <= s.disc_radius() + 4.0 * s.sigma_k);
                if !near {
                    for c in 0..3 {
                        assert!((out.get(c, x, y) - img.get(c, x, y)).abs() < 1e-3 * 0.6);
                    }
                }
            }
        }
    }

    #[test]
    fn closed_form_bias_value() {
        let spec = ArtifactSpec::from_radius((0.0, 0.0), 12.8);
        assert!((spec.sigma_k - 15.24).abs() < 1e-12);
        // 1 - exp(-1.012 * 0.1536)
        assert!((spec.o_k - 0.1440).abs() < 1e-3);
        assert!((spec.o_k - (1.0 - (-1.012f64 * 0.1536).exp())).abs() < 1e-12);
    }

    #[test]
    fn bias_increases_with_radius() {
        let mut prev = artifact_bias(12.8);
        for i in 1..=100 {
            let b = artifact_bias(12.8 + 12.8 * i as f64 / 100.0);
            assert!(b > prev);
            prev = b;
        }
    }

    #[test]
    fn sampler_ranges() {
        let mut s = SeededStream::from_seed(17);
        let region = PlacementRegion::full(512, 512);
        for _ in 0..1000 {
            let specs = sample_artifacts(&mut s, 512, &region);
            assert!((10..=25).contains(&specs.len()));
            for a in specs {
                assert!((12.8..=25.6).contains(&a.r_k));
                assert!((a.sigma_k - (5.0 + 0.8 * a.r_k)).abs() < 1e-9);
                assert!((a.o_k - artifact_bias(a.r_k)).abs() < 1e-9);
                assert!(region.contains(a.center));
            }
        }
    }

    #[test]
    fn placement_respects_circle() {
        let region = PlacementRegion { center: (100.0, 80.0), radius: 30.0, width: 200, height: 160 };
        let mut s = SeededStream::from_seed(8);
        for _ in 0..2000 {
            let p = region.sample(&mut s);
            assert!((p.0 - 100.0).hypot(p.1 - 80.0) <= 30.0);
        }
    }

    #[test]
    fn placement_falls_back_to_center() {
        // Circle entirely outside the image: nothing can be accepted.
        let region = PlacementRegion { center: (500.0, 500.0), radius: 5.0, width: 50, height: 50 };
        assert_eq!(region.sample(&mut SeededStream::from_seed(1)), (500.0, 500.0));
    }

    #[test]
    fn centered_mask_area() {
        let spec = ArtifactSpec { center: (64.0, 64.0), r_k: 16.0, sigma_k: 6.0, o_k: 0.2 };
        let mask = ground_truth_mask(128, 128, &[spec]).unwrap();
        let area: f64 = mask.data().iter().sum();
        let r = spec.mask_radius();
        let (lo, hi) = (std::f64::consts::PI * (r - 1.0).powi(2), std::f64::consts::PI * (r + 1.0).powi(2));
        assert!(area >= lo && area <= hi, "{area}");
    }

    #[test]
    fn mask_contains_visible_effect() {
        let region = PlacementRegion { center: (256.0, 256.0), radius: 200.0, width: 512, height: 512 };
        let (mut visible, mut covered) = (0usize, 0usize);
        for seed in 0..4 {
            let img = textured(512, 512, seed);
            let specs = sample_artifacts(&mut SeededStream::from_seed(seed), 512, &region);
            let out = apply_artifacts(&img, &specs).unwrap();
            let mask = ground_truth_mask(512, 512, &specs).unwrap();
            let n = img.plane_len();
            for i in 0..n {
                if (0..3).any(|c| (out.data()[c * n + i] - img.data()[c * n + i]).abs() > 0.01) {
                    visible += 1;
                    covered += (mask.data()[i] == 1.0) as usize;
                }
            }
        }
        assert!(covered as f64 >= 0.99 * visible as f64, "{covered}/{visible}");
    }

    #[test]
    fn sharp_strong_blob_escapes_two_sigma_mask() {
        // Outside the sampled regime (sigma far below the disc radius) the
        // 2-sigma dilation no longer bounds the 0.01 support.
        let spec = ArtifactSpec { center: (64.0, 64.0), r_k: 80.0, sigma_k: 3.0, o_k: 0.9 };
        let layer = render_artifact_layer(128, 128, &spec).unwrap();
        let edge = (64.0 + spec.mask_radius()).ceil() as usize;
        assert!(layer.get(edge, 64) > 0.01);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn superposition(seed in any::<u64>()) {
            let mut s = SeededStream::from_seed(seed);
            let img = textured(64, 64, seed);
            let specs = sample_artifacts(&mut s, 64, &PlacementRegion::full(64, 64));
            let (a, b) = specs.split_at(specs.len() / 2);
            let joint = apply_artifacts(&img, &specs).unwrap();
            let staged = apply_artifacts(&apply_artifacts(&img, a).unwrap(), b).unwrap();
            for (x, y) in joint.data().iter().zip(staged.data()) {
                prop_assert!((x - y).abs() < 1e-9);
            }
        }
    }
}
