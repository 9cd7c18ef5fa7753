//! Full-reference image quality metrics and the reference training losses.

mod eval;
mod loss;
mod quality;

pub use eval::{evaluate_dirs, PairQuality, QualityReport};
pub use loss::{loss_c, loss_m, loss_p, total_loss, LossWeights};
pub use quality::{mse, psnr, ssim, SSIM_K1, SSIM_K2, SSIM_SIGMA, SSIM_WINDOW};
