use super::fov::{detect_fov, FovMask};
use super::record::{
    ArtifactParams, Canvas, Conventions, DegradationRecord, Factor, FactorParams, FactorSelection, IlluminationParams,
};
use crate::artifact::{apply_artifacts, ground_truth_mask, sample_artifacts};
use crate::blur::{apply_defocus, sample_blur, DEFAULT_NOISE_STD};
use crate::error::{Error, Result};
use crate::image_core::{ImageF, MaskF};
use crate::light::{apply_light_disturbance, build_panel, sample_light_leak, sample_uneven_exposure};
use crate::stream::{SeededStream, StreamPath};
use crate::SPEC_VERSION;

/// Stream lane for parameter sampling.
pub const PARAMS_LANE: u32 = 0;
/// Stream lane for per-pixel blur noise.
pub const NOISE_LANE: u32 = 1;
/// Factor index reserved for drawing a random factor selection.
pub const SELECTION_INDEX: u32 = 16;

const PANEL_ATTEMPTS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DegradeConfig {
    pub noise_std: f64,
    /// Resample the input to this size before degrading.
    pub resize: Option<(usize, usize)>,
}

impl Default for DegradeConfig {
    fn default() -> Self {
        Self { noise_std: DEFAULT_NOISE_STD, resize: None }
    }
}

#[derive(Debug, Clone)]
pub struct Degraded {
    pub image: ImageF,
    pub mask: MaskF,
    pub record: DegradationRecord,
}

fn stream_for(seed: u64, image_id: &str, variant: u32, factor_index: u32, lane: u32) -> SeededStream {
    SeededStream::new(seed, &StreamPath::new(image_id, variant, factor_index, lane))
}

fn draw_selection(stream: &mut SeededStream, force_all: bool) -> Vec<Factor> {
    let (light, blur, artifact) = if force_all {
        (true, true, true)
    } else {
        loop {
            let picks = (stream.coin(), stream.coin(), stream.coin());
            if picks.0 || picks.1 || picks.2 {
                break picks;
            }
        }
    };
    let mut factors = Vec::new();
    if light {
        factors.push(if stream.coin() { Factor::LightLeak } else { Factor::UnevenExposure });
    }
    if blur {
        factors.push(Factor::Blur);
    }
    if artifact {
        factors.push(Factor::Artifact);
    }
    factors
}

/// Resolves a selection to a concrete, ordered factor list.
pub fn resolve_factors(
    selection: &FactorSelection,
    master_seed: u64,
    image_id: &str,
    variant: u32,
) -> Result<Vec<Factor>> {
    match selection {
        FactorSelection::Explicit(list) => FactorSelection::normalized(list),
        FactorSelection::Random | FactorSelection::All => {
            let mut stream = stream_for(master_seed, image_id, variant, SELECTION_INDEX, PARAMS_LANE);
            Ok(draw_selection(&mut stream, *selection == FactorSelection::All))
        }
    }
}

/// Redraws an illumination panel until its center lies in the placement
/// region; after 100 misses the last center is pulled onto the region edge.
fn sample_illumination(
    factor: Factor,
    stream: &mut SeededStream,
    width: usize,
    height: usize,
    fov: &FovMask,
) -> IlluminationParams {
    let region = fov.placement(width, height);
    let sampler: fn(&mut SeededStream, usize) -> _ = match factor {
        Factor::LightLeak => sample_light_leak,
        _ => sample_uneven_exposure,
    };
    let mut last = None;
    for _ in 0..PANEL_ATTEMPTS {
        let (panel, tone) = sampler(stream, width);
        let d = (panel.center.0 - region.center.0).hypot(panel.center.1 - region.center.1);
        if d <= region.radius {
            return IlluminationParams { panel, tone };
        }
        last = Some((panel, tone, d));
    }
    let (mut panel, tone, d) = last.expect("at least one attempt");
    let scale = region.radius / d;
    panel.center = (
        region.center.0 + (panel.center.0 - region.center.0) * scale,
        region.center.1 + (panel.center.1 - region.center.1) * scale,
    );
    IlluminationParams { panel, tone }
}

fn prepare(img: &ImageF, resize: Option<(usize, usize)>) -> Result<ImageF> {
    if img.channels() != 3 {
        return Err(Error::UnsupportedLayout(img.channels()));
    }
    match resize {
        Some((w, h)) => img.resize(w, h),
        None => Ok(img.clone()),
    }
}

/// Samples and applies a degradation to `img`.
///
/// Factors are applied illumination, then blur, then artifacts; the result is
/// clamped to `[0, 1]`. Every sampled value comes from a stream derived from
/// `(master_seed, image_id, variant, factor index)`.
pub fn degrade(
    img: &ImageF,
    master_seed: u64,
    image_id: &str,
    variant: u32,
    selection: &FactorSelection,
    config: &DegradeConfig,
) -> Result<Degraded> {
    let factors = resolve_factors(selection, master_seed, image_id, variant)?;
    let clean = prepare(img, config.resize)?;
    let (w, h, _) = clean.dims();
    let fov = detect_fov(&clean);
    let mut params = FactorParams::default();
    for &factor in &factors {
        let mut stream = stream_for(master_seed, image_id, variant, factor.index(), PARAMS_LANE);
        match factor {
            Factor::LightLeak => params.light_leak = Some(sample_illumination(factor, &mut stream, w, h, &fov)),
            Factor::UnevenExposure => {
                params.uneven_exposure = Some(sample_illumination(factor, &mut stream, w, h, &fov))
            }
            Factor::Blur => params.blur = Some(sample_blur(&mut stream, w, config.noise_std)),
            Factor::Artifact => {
                let specs = sample_artifacts(&mut stream, w, &fov.placement(w, h));
                params.artifact = Some(ArtifactParams { specs });
            }
        }
    }
    let record = DegradationRecord {
        spec_version: SPEC_VERSION.into(),
        master_seed,
        image_id: image_id.into(),
        variant,
        factors,
        params,
        fov,
        canvas: Canvas { width: w, height: h, resized: config.resize.is_some() },
        conventions: Conventions::current(config.noise_std),
    };
    let (image, mask) = apply_record(&clean, &record)?;
    Ok(Degraded { image, mask, record })
}

/// Applies recorded parameters to an image already at the record's canvas
/// size. Blur noise is regenerated from the record's stream path.
pub fn apply_record(clean: &ImageF, record: &DegradationRecord) -> Result<(ImageF, MaskF)> {
    let (w, h, _) = clean.dims();
    if (w, h) != (record.canvas.width, record.canvas.height) {
        return Err(Error::shape(format!(
            "record canvas is {}x{}, image is {w}x{h}",
            record.canvas.width, record.canvas.height
        )));
    }
    let mut x = clean.clone();
    let mut mask = MaskF::zeros(w, h);
    for &factor in &record.factors {
        match factor {
            Factor::LightLeak | Factor::UnevenExposure => {
                let p = record.params.illumination().ok_or_else(|| Error::param("missing illumination params"))?;
                x = apply_light_disturbance(&x, &build_panel(w, h, &p.panel)?, &p.tone)?;
            }
            Factor::Blur => {
                let p = record.params.blur.as_ref().ok_or_else(|| Error::param("missing blur params"))?;
                let mut noise =
                    stream_for(record.master_seed, &record.image_id, record.variant, Factor::Blur.index(), NOISE_LANE);
                x = apply_defocus(&x, p, &mut noise)?;
            }
            Factor::Artifact => {
                let p = record.params.artifact.as_ref().ok_or_else(|| Error::param("missing artifact params"))?;
                x = apply_artifacts(&x, &p.specs)?;
                mask = ground_truth_mask(w, h, &p.specs)?;
            }
        }
    }
    Ok((x.clamp01(), mask))
}

/// Re-runs a recorded synthesis against its clean source image.
pub fn replay(img: &ImageF, record: &DegradationRecord) -> Result<(ImageF, MaskF)> {
    if record.spec_version != SPEC_VERSION {
        return Err(Error::VersionMismatch { found: record.spec_version.clone(), expected: SPEC_VERSION.into() });
    }
    record.validate()?;
    let resize = record.canvas.resized.then_some((record.canvas.width, record.canvas.height));
    let clean = prepare(img, resize)?;
    apply_record(&clean, record)
}
