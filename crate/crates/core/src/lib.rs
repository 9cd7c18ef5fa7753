//! Deterministic synthesis of low-quality retinal fundus images.
//!
//! The crate models three families of degradation seen in fundus photography
//! (light transmission disturbance, defocus blur and lens-dust artifacts),
//! composes them into seeded synthesis runs that emit paired
//! `(clean, degraded, mask)` training data with JSON provenance, and provides
//! the PSNR/SSIM metrics and reference losses used to score restorations.
//!
//! Every sampled value is a pure function of a 64-bit master seed and a
//! derivation path, so datasets are reproducible regardless of scheduling.

// `!(x > 0.0)` is how parameter checks reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod artifact;
pub mod blur;
pub mod error;
pub mod image_core;
pub mod light;
pub mod metrics;
pub mod pipeline;
pub mod stream;

pub use artifact::{apply_artifacts, ground_truth_mask, render_artifact_layer, sample_artifacts, ArtifactSpec};
pub use blur::{apply_defocus, blur_radius, sample_blur, BlurParams, LensConfig, DEFAULT_NOISE_STD};
pub use error::{Error, Result};
pub use image_core::{
    clip_saturate, convolve_gaussian, decode_image, encode_image, gaussian_kernel, kernel_radius, load_image,
    GaussianKernel, ImageF, MaskF,
};
pub use light::{
    apply_light_disturbance, build_panel, sample_light_leak, sample_uneven_exposure, GlobalToneParams,
    IlluminationPanelParams,
};
pub use metrics::{loss_c, loss_m, loss_p, psnr, ssim, total_loss, LossWeights, QualityReport};
pub use pipeline::{degrade, detect_fov, replay, synth_dataset, DegradationRecord, Factor, FactorSelection, FovMask};
pub use stream::{SeededStream, StreamPath};

/// Version tag embedded in every provenance sidecar and manifest.
pub const SPEC_VERSION: &str = "fundeg-1";
