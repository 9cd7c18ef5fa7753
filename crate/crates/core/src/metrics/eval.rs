use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::quality::{psnr, ssim};
use crate::error::{Error, Result};
use crate::image_core::load_image;
use crate::pipeline::list_images;

/// Score for one reference/test pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairQuality {
    pub id: String,
    #[serde(serialize_with = "ser_db", deserialize_with = "de_db")]
    pub psnr: f64,
    pub ssim: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QualityReport {
    pub pairs: Vec<PairQuality>,
    #[serde(serialize_with = "ser_db", deserialize_with = "de_db")]
    pub mean_psnr: f64,
    pub mean_ssim: f64,
    pub count: usize,
}

impl QualityReport {
    /// Aggregates rows, sorting them by id so the means are reduced in a
    /// fixed order.
    pub fn from_pairs(mut pairs: Vec<PairQuality>) -> Self {
        pairs.sort_by(|a, b| a.id.cmp(&b.id));
        let count = pairs.len();
        let (mean_psnr, mean_ssim) = if count == 0 {
            (f64::NAN, f64::NAN)
        } else {
            (
                pairs.iter().map(|p| p.psnr).sum::<f64>() / count as f64,
                pairs.iter().map(|p| p.ssim).sum::<f64>() / count as f64,
            )
        };
        Self { pairs, mean_psnr, mean_ssim, count }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

// JSON has no infinity literal, so an exact match is written as "inf".
fn ser_db<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
    if v.is_infinite() && *v > 0.0 {
        s.serialize_str("inf")
    } else {
        s.serialize_f64(*v)
    }
}

fn de_db<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Db {
        Num(f64),
        Text(String),
    }
    match Db::deserialize(d)? {
        Db::Num(v) => Ok(v),
        Db::Text(t) if t == "inf" => Ok(f64::INFINITY),
        Db::Text(t) => Err(serde::de::Error::custom(format!("expected number or \"inf\", got {t:?}"))),
    }
}

/// Scores every image in `test_dir` against the file of the same name in
/// `ref_dir`. Pairs whose dimensions differ or that fail to decode are
/// skipped with a warning.
pub fn evaluate_dirs(ref_dir: &Path, test_dir: &Path) -> Result<QualityReport> {
    let names: Vec<String> = list_images(test_dir)?
        .into_iter()
        .filter_map(|p| p.file_name().map(|n| n.to_string_lossy().into_owned()))
        .filter(|name| ref_dir.join(name).is_file())
        .collect();
    if names.is_empty() {
        return Err(Error::param(format!(
            "no matching image filenames between {} and {}",
            ref_dir.display(),
            test_dir.display()
        )));
    }
    let rows: Vec<PairQuality> = names
        .par_iter()
        .filter_map(|name| {
            let scored = (|| -> Result<PairQuality> {
                let reference = load_image(ref_dir.join(name))?;
                let test = load_image(test_dir.join(name))?;
                Ok(PairQuality { id: name.clone(), psnr: psnr(&reference, &test)?, ssim: ssim(&reference, &test)? })
            })();
            scored.map_err(|e| log::warn!("skipping pair {name}: {e}")).ok()
        })
        .collect();
    Ok(QualityReport::from_pairs(rows))
}
