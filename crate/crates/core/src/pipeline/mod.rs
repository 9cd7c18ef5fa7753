//! Seeded composition of the degradation operators, field-of-view
//! detection, provenance records and batch dataset synthesis.

mod dataset;
mod degrade;
mod fov;
mod record;

pub use dataset::{list_images, synth_dataset, Manifest, ManifestEntry, SynthOptions, SynthSummary, RESIZE_TARGET};
pub use degrade::{
    apply_record, degrade, replay, resolve_factors, DegradeConfig, Degraded, NOISE_LANE, PARAMS_LANE, SELECTION_INDEX,
};
pub use fov::{detect_fov, FovMask, FOV_MIN_FRACTION, FOV_THRESHOLD, PLACEMENT_FRACTION};
pub use record::{
    ArtifactParams, Canvas, Conventions, DegradationRecord, Factor, FactorParams, FactorSelection, IlluminationParams,
};
