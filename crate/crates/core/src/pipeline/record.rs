use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::fov::FovMask;
use crate::artifact::ArtifactSpec;
use crate::blur::BlurParams;
use crate::error::{Error, Result};
use crate::light::{GlobalToneParams, IlluminationPanelParams};
use crate::SPEC_VERSION;

/// One degradation family. Declaration order is the application order and
/// the factor index used for stream derivation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Factor {
    LightLeak,
    UnevenExposure,
    Blur,
    Artifact,
}

impl Factor {
    pub const ALL: [Factor; 4] = [Factor::LightLeak, Factor::UnevenExposure, Factor::Blur, Factor::Artifact];

    pub fn index(self) -> u32 {
        self as u32
    }

    pub fn tag(self) -> &'static str {
        match self {
            Factor::LightLeak => "light_leak",
            Factor::UnevenExposure => "uneven_exposure",
            Factor::Blur => "blur",
            Factor::Artifact => "artifact",
        }
    }

    pub fn is_illumination(self) -> bool {
        matches!(self, Factor::LightLeak | Factor::UnevenExposure)
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Factor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Factor::ALL.into_iter().find(|f| f.tag() == s).ok_or_else(|| Error::param(format!("unknown factor {s:?}")))
    }
}

/// Which factors a synthesis run applies.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum FactorSelection {
    /// Independent fair coin for illumination, blur and artifacts, redrawn
    /// until one is chosen; a chosen illumination factor is light leak or
    /// uneven exposure with equal odds.
    #[default]
    Random,
    /// Illumination (leak or exposure, equal odds), blur and artifacts.
    All,
    Explicit(Vec<Factor>),
}

impl FactorSelection {
    /// Checks an explicit list and returns it in application order.
    pub fn normalized(factors: &[Factor]) -> Result<Vec<Factor>> {
        if factors.is_empty() {
            return Err(Error::param("factor list is empty"));
        }
        let mut sorted = factors.to_vec();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != factors.len() {
            return Err(Error::param("factor list repeats a factor"));
        }
        if sorted.contains(&Factor::LightLeak) && sorted.contains(&Factor::UnevenExposure) {
            return Err(Error::param("light_leak and uneven_exposure are mutually exclusive"));
        }
        Ok(sorted)
    }

    pub fn describe(&self) -> String {
        match self {
            FactorSelection::Random => "random".into(),
            FactorSelection::All => "all".into(),
            FactorSelection::Explicit(f) => f.iter().map(|f| f.tag()).collect::<Vec<_>>().join(","),
        }
    }
}

impl FromStr for FactorSelection {
    type Err = Error;

    /// `random`, `all`, or a comma-separated list of factor tags.
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "random" => Ok(FactorSelection::Random),
            "all" => Ok(FactorSelection::All),
            list => {
                let factors = list
                    .split(',')
                    .map(|t| t.trim())
                    .filter(|t| !t.is_empty())
                    .map(Factor::from_str)
                    .collect::<Result<Vec<_>>>()?;
                Ok(FactorSelection::Explicit(FactorSelection::normalized(&factors)?))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IlluminationParams {
    pub panel: IlluminationPanelParams,
    pub tone: GlobalToneParams,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArtifactParams {
    pub specs: Vec<ArtifactSpec>,
}

/// Sampled parameters, keyed by factor tag.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub light_leak: Option<IlluminationParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub uneven_exposure: Option<IlluminationParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blur: Option<BlurParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub artifact: Option<ArtifactParams>,
}

impl FactorParams {
    pub fn present(&self) -> Vec<Factor> {
        let mut out = Vec::new();
        if self.light_leak.is_some() {
            out.push(Factor::LightLeak);
        }
        if self.uneven_exposure.is_some() {
            out.push(Factor::UnevenExposure);
        }
        if self.blur.is_some() {
            out.push(Factor::Blur);
        }
        if self.artifact.is_some() {
            out.push(Factor::Artifact);
        }
        out
    }

    pub fn illumination(&self) -> Option<&IlluminationParams> {
        self.light_leak.as_ref().or(self.uneven_exposure.as_ref())
    }
}

/// Working size of the synthesis, and whether the input was resampled to it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Canvas {
    pub width: usize,
    pub height: usize,
    pub resized: bool,
}

/// Modelling conventions a dataset was generated under.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Conventions {
    pub leak_sigma_rule: String,
    pub mask_rule: String,
    pub artifact_sigma_units: String,
    pub noise_std: f64,
}

impl Conventions {
    pub fn current(noise_std: f64) -> Self {
        Self {
            leak_sigma_rule: "sigma_L ~ U[0.66*min(a,b), 0.66*(w-max(a,b))], bounds floored at 0.05*w, \
                              taken in ascending order"
                .into(),
            mask_rule: "binary disc of radius r_k/4 + 2*sigma_k around each artifact center".into(),
            artifact_sigma_units: "sigma_k = 5 + 0.8*r_k in pixels of the working canvas".into(),
            noise_std,
        }
    }
}

/// Full provenance of one synthesized variant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DegradationRecord {
    pub spec_version: String,
    pub master_seed: u64,
    pub image_id: String,
    pub variant: u32,
    pub factors: Vec<Factor>,
    pub params: FactorParams,
    pub fov: FovMask,
    pub canvas: Canvas,
    pub conventions: Conventions,
}

impl DegradationRecord {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("record serializes");
        s.push('\n');
        s
    }

    /// Parses and validates a record, rejecting other format versions.
    pub fn from_json(text: &str, origin: &Path) -> Result<Self> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|source| Error::Json { path: origin.into(), source })?;
        if let Some(found) = value.get("spec_version").and_then(|v| v.as_str()) {
            if found != SPEC_VERSION {
                return Err(Error::VersionMismatch { found: found.into(), expected: SPEC_VERSION.into() });
            }
        }
        let record: DegradationRecord =
            serde_json::from_value(value).map_err(|source| Error::Json { path: origin.into(), source })?;
        record.validate()?;
        Ok(record)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text, path)
    }

    pub fn validate(&self) -> Result<()> {
        if self.factors.is_empty() {
            return Err(Error::param("record lists no factors"));
        }
        let normalized = FactorSelection::normalized(&self.factors)?;
        if normalized != self.factors {
            return Err(Error::param("record factors are not in application order"));
        }
        if self.params.present() != self.factors {
            return Err(Error::param("record params do not match its factor list"));
        }
        if self.canvas.width == 0 || self.canvas.height == 0 {
            return Err(Error::param("record canvas is empty"));
        }
        if let Some(p) = self.params.illumination() {
            p.panel.validate()?;
            p.tone.validate()?;
        }
        if let Some(b) = &self.params.blur {
            b.validate()?;
        }
        if let Some(a) = &self.params.artifact {
            a.specs.iter().try_for_each(ArtifactSpec::validate)?;
        }
        Ok(())
    }
}
