//! Reference losses for artifact-aware restoration training.
//!
//! Squared norms use the per-element mean so values do not depend on
//! resolution; multiply by the element count to recover the summed form.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::image_core::{ImageF, MaskF};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LossWeights {
    pub lambda_p: f64,
    pub lambda_c: f64,
    pub lambda_v: f64,
}

impl Default for LossWeights {
    fn default() -> Self {
        Self { lambda_p: 10.0, lambda_c: 1.0, lambda_v: 0.1 }
    }
}

/// Reconstruction loss: mean of `(gt - pred)^2`.
pub fn loss_c(pred: &ImageF, gt: &ImageF) -> Result<f64> {
    pred.check_same_shape(gt, "loss_c operands differ")?;
    let sum: f64 = gt.data().iter().zip(pred.data()).map(|(g, p)| (g - p) * (g - p)).sum();
    Ok(sum / gt.data().len() as f64)
}

/// Mask supervision loss: mean of `(m_gt - m)^2`.
pub fn loss_m(pred_mask: &MaskF, gt_mask: &MaskF) -> Result<f64> {
    loss_c(pred_mask.as_image(), gt_mask.as_image())
}

/// Artifact-weighted loss: mean of `(mask * (gt - pred))^2`, with the mask
/// broadcast over channels.
pub fn loss_p(pred: &ImageF, gt: &ImageF, mask: &MaskF) -> Result<f64> {
    pred.check_same_shape(gt, "loss_p operands differ")?;
    if (mask.width(), mask.height()) != (gt.width(), gt.height()) {
        return Err(Error::shape(format!(
            "loss_p mask is {}x{}, image is {}x{}",
            mask.width(),
            mask.height(),
            gt.width(),
            gt.height()
        )));
    }
    let m = mask.data();
    let mut sum = 0.0;
    for c in 0..gt.channels() {
        for ((g, p), w) in gt.plane(c).iter().zip(pred.plane(c)).zip(m) {
            let e = w * (g - p);
            sum += e * e;
        }
    }
    Ok(sum / gt.data().len() as f64)
}

/// `l_m + sum_s (lambda_p l_p[s] + lambda_c l_c[s]) + lambda_v l_v`.
pub fn total_loss(l_m: f64, l_p_per_scale: &[f64], l_c_per_scale: &[f64], l_v: f64, w: &LossWeights) -> Result<f64> {
    if l_p_per_scale.len() != l_c_per_scale.len() || l_p_per_scale.is_empty() {
        return Err(Error::param(format!(
            "need equal, nonzero scale counts; got {} perceiving and {} reconstruction terms",
            l_p_per_scale.len(),
            l_c_per_scale.len()
        )));
    }
    let scales: f64 = l_p_per_scale.iter().zip(l_c_per_scale).map(|(p, c)| w.lambda_p * p + w.lambda_c * c).sum();
    Ok(l_m + scales + w.lambda_v * l_v)
}
