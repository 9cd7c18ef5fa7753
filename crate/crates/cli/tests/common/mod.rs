#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use fundeg_core::image_core::{encode_image, write_atomic};
use fundeg_core::{ImageF, SeededStream};
use sha2::{Digest, Sha256};

pub fn fundeg() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fundeg"))
}

pub fn run(args: &[&str]) -> Output {
    fundeg().args(args).output().expect("spawn fundeg")
}

pub fn path_str(p: &Path) -> &str {
    p.to_str().expect("utf-8 path")
}

/// Synthetic fundus photograph: black border, reddish field of view with
/// radial falloff, a bright optic disc, dark vessel-like curves and fine
/// texture. Varies with `seed`.
pub fn fundus_image(size: usize, seed: u64) -> ImageF {
    let mut s = SeededStream::from_seed(seed);
    let s_f = size as f64;
    let (cx, cy) = (s_f / 2.0 + s.uniform(-4.0, 4.0), s_f / 2.0 + s.uniform(-4.0, 4.0));
    let fov_r = s.uniform(0.42, 0.47) * s_f;
    let disc = (cx + s.uniform(0.15, 0.25) * s_f, cy + s.uniform(-0.05, 0.05) * s_f);
    let disc_r = 0.06 * s_f;
    let base = [s.uniform(0.55, 0.7), s.uniform(0.25, 0.35), s.uniform(0.08, 0.15)];
    let vessels: Vec<(f64, f64, f64)> =
        (0..8).map(|_| (s.uniform(0.0, std::f64::consts::TAU), s.uniform(0.02, 0.06), s.uniform(1.5, 3.5))).collect();
    let texture: Vec<f64> = (0..size * size).map(|_| s.uniform(-0.03, 0.03)).collect();
    ImageF::from_fn(size, size, 3, |c, x, y| {
        let (dx, dy) = (x as f64 - cx, y as f64 - cy);
        let r = dx.hypot(dy);
        if r > fov_r {
            return 0.0;
        }
        let mut v = base[c] * (1.0 - 0.35 * (r / fov_r).powi(2));
        // Vessels radiate from the optic disc with a slow wobble.
        let (vx, vy) = (x as f64 - disc.0, y as f64 - disc.1);
        let angle = vy.atan2(vx);
        let dist = vx.hypot(vy);
        for &(theta, wobble, width) in &vessels {
            let a = theta + wobble * (dist / 25.0).sin();
            let off = dist * (angle - a).sin().abs();
            if (angle - a).cos() > 0.0 && off < width {
                v -= [0.25, 0.15, 0.05][c] * (1.0 - off / width);
            }
        }
        let dd = (x as f64 - disc.0).hypot(y as f64 - disc.1);
        if dd < disc_r {
            v += [0.3, 0.35, 0.25][c] * (1.0 - dd / disc_r);
        }
        (v + texture[y * size + x]).clamp(0.0, 1.0)
    })
}

pub fn write_png(path: &Path, img: &ImageF) {
    write_atomic(path, &encode_image(img).unwrap()).unwrap();
}

/// Writes `count` fundus images named `img_<i>.png`.
pub fn write_fundus_dir(dir: &Path, count: usize, size: usize) -> Vec<PathBuf> {
    std::fs::create_dir_all(dir).unwrap();
    (0..count)
        .map(|i| {
            let p = dir.join(format!("img_{i}.png"));
            write_png(&p, &fundus_image(size, 1000 + i as u64));
            p
        })
        .collect()
}

/// SHA-256 of every file under `root`, keyed by relative path.
pub fn tree_hashes(root: &Path) -> BTreeMap<String, String> {
    let mut out = BTreeMap::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(dir) = stack.pop() {
        for entry in std::fs::read_dir(&dir).unwrap() {
            let p = entry.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                let rel = p.strip_prefix(root).unwrap().to_string_lossy().into_owned();
                out.insert(rel, hex::encode(Sha256::digest(std::fs::read(&p).unwrap())));
            }
        }
    }
    out
}

/// Pixel bytes of a PNG as decoded RGB8 (or L8 for grayscale).
pub fn png_pixels(path: &Path) -> Vec<u8> {
    let img = image::open(path).unwrap();
    match img.color().channel_count() {
        1 => img.to_luma8().into_raw(),
        _ => img.to_rgb8().into_raw(),
    }
}
