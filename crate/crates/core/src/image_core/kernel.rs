use crate::error::{Error, Result};

/// Normalized, symmetric 1-D Gaussian of `2 * radius + 1` taps.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianKernel {
    radius: usize,
    sigma: f64,
    weights: Vec<f64>,
}

impl GaussianKernel {
    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn is_identity(&self) -> bool {
        self.radius == 0
    }
}

/// Samples `exp(-(i - r)^2 / (2 sigma^2))` at integer offsets and normalizes
/// the taps to sum to one.
pub fn gaussian_kernel(radius: usize, sigma: f64) -> Result<GaussianKernel> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::param(format!("gaussian sigma must be positive and finite, got {sigma}")));
    }
    let denom = 2.0 * sigma * sigma;
    // Fill one half and mirror it so the taps are exactly symmetric.
    let half: Vec<f64> = (0..=radius).map(|d| (-((d * d) as f64) / denom).exp()).collect();
    let mut weights = Vec::with_capacity(2 * radius + 1);
    weights.extend(half.iter().rev());
    weights.extend(&half[1..]);
    let sum: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= sum;
    }
    Ok(GaussianKernel { radius, sigma, weights })
}

/// Discrete tap radius for a continuous radius: nearest integer, at least 1.
pub fn kernel_radius(radius: f64) -> usize {
    (radius.round().max(1.0)) as usize
}
