use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use fundeg_core::{FactorSelection, DEFAULT_NOISE_STD};

#[derive(Debug, Parser)]
#[command(name = "fundeg", version, about = "Seeded fundus image degradation, replay and evaluation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Degrade a single image.
    Degrade(DegradeArgs),
    /// Build a paired dataset from a directory of clean images.
    Synth(SynthArgs),
    /// Re-apply a recorded degradation to its clean image.
    Replay(ReplayArgs),
    /// Score test images against same-named reference images.
    Eval(EvalArgs),
}

fn parse_factors(s: &str) -> Result<FactorSelection, String> {
    s.parse().map_err(|e: fundeg_core::Error| e.to_string())
}

fn parse_noise(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v >= 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!("noise std must be a non-negative number, got {s:?}")),
    }
}

#[derive(Debug, Args)]
pub struct SamplingArgs {
    /// Master seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// `random`, `all`, or a comma list of light_leak, uneven_exposure, blur, artifact.
    #[arg(long, default_value = "random", value_parser = parse_factors)]
    pub factors: FactorSelection,
    /// Resize inputs to 512x512 before degrading.
    #[arg(long)]
    pub resize: bool,
    /// Standard deviation of the additive blur noise.
    #[arg(long, default_value_t = DEFAULT_NOISE_STD, value_parser = parse_noise)]
    pub noise_std: f64,
}

#[derive(Debug, Args)]
pub struct DegradeArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
    /// Where to write the artifact mask PNG.
    #[arg(long)]
    pub mask: Option<PathBuf>,
    /// Where to write the JSON provenance record.
    #[arg(long)]
    pub params: Option<PathBuf>,
    /// Variant index within the derivation path.
    #[arg(long, default_value_t = 0)]
    pub variant: u32,
    #[command(flatten)]
    pub sampling: SamplingArgs,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long)]
    pub clean_dir: PathBuf,
    #[arg(long)]
    pub out_dir: PathBuf,
    /// Degraded variants per clean image.
    #[arg(long, default_value_t = 1)]
    pub variants: u32,
    /// Concurrent per-image tasks (0 = one per core).
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
    #[command(flatten)]
    pub sampling: SamplingArgs,
}

#[derive(Debug, Args)]
pub struct ReplayArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub params: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
    #[arg(long)]
    pub mask: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub ref_dir: PathBuf,
    #[arg(long)]
    pub test_dir: PathBuf,
    #[arg(long)]
    pub report: PathBuf,
}
