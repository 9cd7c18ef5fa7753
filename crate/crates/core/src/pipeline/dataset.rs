use std::collections::btree_map::{BTreeMap, Entry};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::degrade::{degrade, DegradeConfig};
use super::record::FactorSelection;
use crate::error::{Error, Result};
use crate::image_core::{encode_image, encode_mask, load_image, write_atomic};
use crate::stream::STREAM_HASH_DESCRIPTION;
use crate::SPEC_VERSION;

/// Working size used when resizing is requested.
pub const RESIZE_TARGET: (usize, usize) = (512, 512);

const RANDOM_RULE: &str = "random: independent fair coin for illumination, blur and artifact, redrawn until one \
     is chosen; illumination is light_leak or uneven_exposure with equal odds";

#[derive(Debug, Clone)]
pub struct SynthOptions {
    pub master_seed: u64,
    pub variants_per_image: u32,
    pub selection: FactorSelection,
    pub resize: bool,
    pub noise_std: f64,
    /// Worker threads; `0` lets the pool decide.
    pub jobs: usize,
}

impl Default for SynthOptions {
    fn default() -> Self {
        Self {
            master_seed: 0,
            variants_per_image: 1,
            selection: FactorSelection::Random,
            resize: false,
            noise_std: crate::blur::DEFAULT_NOISE_STD,
            jobs: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub clean: String,
    pub degraded: String,
    pub mask: String,
    pub params: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub spec_version: String,
    pub master_seed: u64,
    pub count: usize,
    pub entries: Vec<ManifestEntry>,
    pub stream_hash: String,
    pub factor_selection: String,
    pub selection_rule: String,
}

#[derive(Debug, Clone)]
pub struct SynthSummary {
    pub images_found: usize,
    pub images_used: usize,
    pub variants_written: usize,
    pub failures: Vec<(PathBuf, String)>,
    pub elapsed: Duration,
}

fn is_image(path: &Path) -> bool {
    path.extension()
        .and_then(|e| e.to_str())
        .map(|e| matches!(e.to_ascii_lowercase().as_str(), "png" | "jpg" | "jpeg"))
        .unwrap_or(false)
}

/// PNG/JPEG files directly inside `dir`, sorted by name.
pub fn list_images(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| Error::io(dir, e))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && is_image(p))
        .collect();
    files.sort();
    Ok(files)
}

fn create_dir(path: &Path) -> Result<()> {
    std::fs::create_dir_all(path).map_err(|e| Error::io(path, e))
}

/// Degrades every image under `clean_dir` `variants_per_image` times and
/// writes `degraded/`, `mask/`, `params/` and `manifest.json` under `out_dir`.
///
/// Output bytes depend only on the inputs and options, never on `jobs`.
/// Images that fail to decode are logged and reported in the summary.
pub fn synth_dataset(clean_dir: &Path, out_dir: &Path, opts: &SynthOptions) -> Result<SynthSummary> {
    let started = Instant::now();
    let files = list_images(clean_dir)?;
    if files.is_empty() {
        return Err(Error::param(format!("no PNG or JPEG images in {}", clean_dir.display())));
    }
    if let FactorSelection::Explicit(list) = &opts.selection {
        FactorSelection::normalized(list)?;
    }
    for sub in ["degraded", "mask", "params"] {
        create_dir(&out_dir.join(sub))?;
    }

    // Image ids are file stems; a later file with a taken stem is skipped.
    let mut by_id: BTreeMap<String, PathBuf> = BTreeMap::new();
    let mut failures = Vec::new();
    for f in &files {
        let id = f.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        match by_id.entry(id) {
            Entry::Occupied(e) => {
                log::warn!("skipping {}: image id {:?} already used", f.display(), e.key());
                failures.push((f.clone(), format!("duplicate image id {:?}", e.key())));
            }
            Entry::Vacant(e) => {
                e.insert(f.clone());
            }
        }
    }

    let config = DegradeConfig { noise_std: opts.noise_std, resize: opts.resize.then_some(RESIZE_TARGET) };
    let work = |(id, path): (&String, &PathBuf)| -> Result<Vec<ManifestEntry>> {
        let clean = load_image(path)?;
        let clean_name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
        (0..opts.variants_per_image)
            .map(|k| {
                let out = degrade(&clean, opts.master_seed, id, k, &opts.selection, &config)?;
                let stem = format!("{id}_{k}");
                let entry = ManifestEntry {
                    clean: clean_name.clone(),
                    degraded: format!("degraded/{stem}.png"),
                    mask: format!("mask/{stem}.png"),
                    params: format!("params/{stem}.json"),
                };
                write_atomic(&out_dir.join(&entry.degraded), &encode_image(&out.image)?)?;
                write_atomic(&out_dir.join(&entry.mask), &encode_mask(&out.mask)?)?;
                write_atomic(&out_dir.join(&entry.params), out.record.to_json().as_bytes())?;
                Ok(entry)
            })
            .collect()
    };

    let tasks: Vec<(&String, &PathBuf)> = by_id.iter().collect();
    let run = || -> Vec<Result<Vec<ManifestEntry>>> { tasks.par_iter().map(|&t| work(t)).collect() };
    let results = if opts.jobs > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(opts.jobs)
            .build()
            .map_err(|e| Error::param(format!("cannot start {} workers: {e}", opts.jobs)))?
            .install(run)
    } else {
        run()
    };

    let mut entries = Vec::new();
    let mut images_used = 0;
    for ((_, path), result) in tasks.iter().zip(results) {
        match result {
            Ok(e) => {
                images_used += 1;
                entries.extend(e);
            }
            Err(err @ Error::Io { .. }) => return Err(err),
            Err(err) => {
                log::warn!("skipping {}: {err}", path.display());
                failures.push(((*path).clone(), err.to_string()));
            }
        }
    }

    let manifest = Manifest {
        spec_version: SPEC_VERSION.into(),
        master_seed: opts.master_seed,
        count: entries.len(),
        entries,
        stream_hash: STREAM_HASH_DESCRIPTION.into(),
        factor_selection: opts.selection.describe(),
        selection_rule: RANDOM_RULE.into(),
    };
    let mut json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    json.push('\n');
    write_atomic(&out_dir.join("manifest.json"), json.as_bytes())?;

    Ok(SynthSummary {
        images_found: files.len(),
        images_used,
        variants_written: manifest.count,
        failures,
        elapsed: started.elapsed(),
    })
}
