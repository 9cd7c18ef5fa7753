use fundeg_core::image_core::{encode_image, encode_mask, load_image, write_atomic};
use fundeg_core::metrics::evaluate_dirs;
use fundeg_core::pipeline::{degrade, replay, synth_dataset, DegradeConfig, SynthOptions, RESIZE_TARGET};
use fundeg_core::{DegradationRecord, Error, Result};

use crate::args::{Command, DegradeArgs, EvalArgs, ReplayArgs, SynthArgs};

pub fn run(command: Command) -> Result<()> {
    match command {
        Command::Degrade(a) => cmd_degrade(a),
        Command::Synth(a) => cmd_synth(a),
        Command::Replay(a) => cmd_replay(a),
        Command::Eval(a) => cmd_eval(a),
    }
}

fn cmd_degrade(a: DegradeArgs) -> Result<()> {
    let img = load_image(&a.input)?;
    let image_id = a.input.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let config = DegradeConfig { noise_std: a.sampling.noise_std, resize: a.sampling.resize.then_some(RESIZE_TARGET) };
    let out = degrade(&img, a.sampling.seed, &image_id, a.variant, &a.sampling.factors, &config)?;
    write_atomic(&a.output, &encode_image(&out.image)?)?;
    if let Some(mask) = &a.mask {
        write_atomic(mask, &encode_mask(&out.mask)?)?;
    }
    if let Some(params) = &a.params {
        write_atomic(params, out.record.to_json().as_bytes())?;
    }
    Ok(())
}

fn cmd_synth(a: SynthArgs) -> Result<()> {
    let opts = SynthOptions {
        master_seed: a.sampling.seed,
        variants_per_image: a.variants,
        selection: a.sampling.factors,
        resize: a.sampling.resize,
        noise_std: a.sampling.noise_std,
        jobs: a.jobs,
    };
    let summary = synth_dataset(&a.clean_dir, &a.out_dir, &opts)?;
    println!("generated {} variants from {} images", summary.variants_written, summary.images_used);
    log::info!("synthesis took {:.2?}", summary.elapsed);
    if summary.variants_written == 0 {
        return Err(Error::Parameter(format!(
            "no variants produced; {} of {} images failed",
            summary.failures.len(),
            summary.images_found
        )));
    }
    Ok(())
}

fn cmd_replay(a: ReplayArgs) -> Result<()> {
    let record = DegradationRecord::load(&a.params)?;
    let img = load_image(&a.input)?;
    let (image, mask) = replay(&img, &record)?;
    write_atomic(&a.output, &encode_image(&image)?)?;
    if let Some(path) = &a.mask {
        write_atomic(path, &encode_mask(&mask)?)?;
    }
    Ok(())
}

fn fmt_db(v: f64) -> String {
    if v.is_infinite() {
        "inf".into()
    } else {
        format!("{v:.2}")
    }
}

fn cmd_eval(a: EvalArgs) -> Result<()> {
    let report = evaluate_dirs(&a.ref_dir, &a.test_dir)?;
    if report.count == 0 {
        return Err(Error::Parameter("every matched pair was skipped".into()));
    }
    let mut json = report.to_json();
    json.push('\n');
    write_atomic(&a.report, json.as_bytes())?;
    println!(
        "mean PSNR {} dB, mean SSIM {:.4} over {} pairs",
        fmt_db(report.mean_psnr),
        report.mean_ssim,
        report.count
    );
    Ok(())
}
