use crate::error::{Error, Result};
use crate::image_core::{gaussian_kernel, ImageF};

/// SSIM window side length.
pub const SSIM_WINDOW: usize = 11;
pub const SSIM_SIGMA: f64 = 1.5;
pub const SSIM_K1: f64 = 0.01;
pub const SSIM_K2: f64 = 0.03;

/// Mean squared error over every sample of every channel.
pub fn mse(a: &ImageF, b: &ImageF) -> Result<f64> {
    a.check_same_shape(b, "mse operands differ")?;
    let sum: f64 = a.data().iter().zip(b.data()).map(|(x, y)| (x - y) * (x - y)).sum();
    Ok(sum / a.data().len() as f64)
}

/// Peak signal-to-noise ratio in dB with peak 1.0. Identical images give
/// `f64::INFINITY`.
pub fn psnr(a: &ImageF, b: &ImageF) -> Result<f64> {
    let err = mse(a, b)?;
    Ok(if err == 0.0 { f64::INFINITY } else { 10.0 * (1.0 / err).log10() })
}

/// 'valid' separable filtering: output is `(w - 2r) x (h - 2r)`.
fn filter_valid(src: &[f64], w: usize, h: usize, k: &[f64]) -> Vec<f64> {
    let taps = k.len();
    let ow = w - taps + 1;
    let oh = h - taps + 1;
    let mut tmp = vec![0.0; ow * h];
    for y in 0..h {
        let row = &src[y * w..(y + 1) * w];
        for x in 0..ow {
            tmp[y * ow + x] = row[x..x + taps].iter().zip(k).map(|(v, w)| v * w).sum();
        }
    }
    let mut out = vec![0.0; ow * oh];
    for y in 0..oh {
        let dst = &mut out[y * ow..(y + 1) * ow];
        for (t, wt) in k.iter().enumerate() {
            for (d, s) in dst.iter_mut().zip(&tmp[(y + t) * ow..(y + t + 1) * ow]) {
                *d += wt * s;
            }
        }
    }
    out
}

fn ssim_plane(a: &[f64], b: &[f64], w: usize, h: usize, k: &[f64]) -> (f64, usize) {
    let c1 = (SSIM_K1 * 1.0).powi(2);
    let c2 = (SSIM_K2 * 1.0).powi(2);
    let prod = |f: &dyn Fn(f64, f64) -> f64| -> Vec<f64> { a.iter().zip(b).map(|(&x, &y)| f(x, y)).collect() };
    let mu_a = filter_valid(a, w, h, k);
    let mu_b = filter_valid(b, w, h, k);
    let e_aa = filter_valid(&prod(&|x, _| x * x), w, h, k);
    let e_bb = filter_valid(&prod(&|_, y| y * y), w, h, k);
    let e_ab = filter_valid(&prod(&|x, y| x * y), w, h, k);
    let mut sum = 0.0;
    for i in 0..mu_a.len() {
        let (ma, mb) = (mu_a[i], mu_b[i]);
        let var_a = e_aa[i] - ma * ma;
        let var_b = e_bb[i] - mb * mb;
        let cov = e_ab[i] - ma * mb;
        let num = (2.0 * ma * mb + c1) * (2.0 * cov + c2);
        let den = (ma * ma + mb * mb + c1) * (var_a + var_b + c2);
        sum += num / den;
    }
    (sum, mu_a.len())
}

/// Single-scale SSIM: 11x11 Gaussian window (sigma 1.5), K1 = 0.01,
/// K2 = 0.03, dynamic range 1.0. Computed per channel over every valid
/// window position and averaged.
pub fn ssim(a: &ImageF, b: &ImageF) -> Result<f64> {
    a.check_same_shape(b, "ssim operands differ")?;
    let (w, h, ch) = a.dims();
    if w < SSIM_WINDOW || h < SSIM_WINDOW {
        return Err(Error::shape(format!("ssim needs at least {SSIM_WINDOW}x{SSIM_WINDOW}, got {w}x{h}")));
    }
    let kernel = gaussian_kernel(SSIM_WINDOW / 2, SSIM_SIGMA)?;
    let (mut total, mut count) = (0.0, 0usize);
    for c in 0..ch {
        let (s, n) = ssim_plane(a.plane(c), b.plane(c), w, h, kernel.weights());
        total += s;
        count += n;
    }
    Ok(total / count as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stream::SeededStream;
    use proptest::prelude::*;

    fn random(w: usize, h: usize, seed: u64) -> ImageF {
        let mut s = SeededStream::from_seed(seed);
        ImageF::from_fn(w, h, 3, |_, _, _| s.unit())
    }

    /// Textbook SSIM evaluated window by window with an explicit 2-D
    /// Gaussian; shares nothing with the separable implementation.
    #[allow(clippy::needless_range_loop)]
    fn reference_ssim(a: &ImageF, b: &ImageF) -> f64 {
        let (w, h, ch) = a.dims();
        let mut g = [[0.0; 11]; 11];
        let mut gsum = 0.0;
        for (i, row) in g.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                let (di, dj) = (i as f64 - 5.0, j as f64 - 5.0);
                *v = (-(di * di + dj * dj) / (2.0 * 1.5 * 1.5)).exp();
                gsum += *v;
            }
        }
        let (c1, c2) = (0.01f64.powi(2), 0.03f64.powi(2));
        let (mut total, mut n) = (0.0, 0);
        for c in 0..ch {
            for y in 0..=h - 11 {
                for x in 0..=w - 11 {
                    let (mut ma, mut mb) = (0.0, 0.0);
                    for i in 0..11 {
                        for j in 0..11 {
                            let wt = g[i][j] / gsum;
                            ma += wt * a.get(c, x + j, y + i);
                            mb += wt * b.get(c, x + j, y + i);
                        }
                    }
                    let (mut va, mut vb, mut cov) = (0.0, 0.0, 0.0);
                    for i in 0..11 {
                        for j in 0..11 {
                            let wt = g[i][j] / gsum;
                            let (da, db) = (a.get(c, x + j, y + i) - ma, b.get(c, x + j, y + i) - mb);
                            va += wt * da * da;
                            vb += wt * db * db;
                            cov += wt * da * db;
                        }
                    }
                    total += (2.0 * ma * mb + c1) * (2.0 * cov + c2) / ((ma * ma + mb * mb + c1) * (va + vb + c2));
                    n += 1;
                }
            }
        }
        total / n as f64
    }

    #[test]
    fn psnr_identical_is_infinite() {
        let a = random(8, 8, 1);
        assert_eq!(psnr(&a, &a).unwrap(), f64::INFINITY);
    }

    #[test]
    fn psnr_closed_forms() {
        let a = ImageF::from_fn(16, 16, 3, |c, x, y| 0.1 + 0.05 * ((c + x + y) % 10) as f64);
        let b = a.map(|v| v + 0.1);
        assert!((psnr(&a, &b).unwrap() - 20.0).abs() < 1e-9);
        let b = a.map(|v| v + 0.01);
        assert!((psnr(&a, &b).unwrap() - 40.0).abs() < 1e-9);
    }

    #[test]
    fn psnr_shape_mismatch() {
        assert!(matches!(psnr(&ImageF::zeros(4, 4, 3), &ImageF::zeros(4, 4, 1)), Err(Error::Shape(_))));
    }

    #[test]
    fn ssim_self_is_one() {
        let a = random(32, 24, 2);
        assert_eq!(ssim(&a, &a).unwrap(), 1.0);
        let c = ImageF::filled(16, 16, 3, 0.5);
        assert_eq!(ssim(&c, &c).unwrap(), 1.0);
    }

    #[test]
    fn ssim_inverted_is_low() {
        let a = random(64, 64, 3);
        let b = a.map(|v| 1.0 - v);
        let s = ssim(&a, &b).unwrap();
        assert!(s < 0.3, "{s}");
        assert!((s - reference_ssim(&a, &b)).abs() < 1e-9);
    }

    #[test]
    fn ssim_matches_reference() {
        let a = random(20, 17, 4);
        let b = a.map(|v| (0.8 * v + 0.05).sqrt());
        assert!((ssim(&a, &b).unwrap() - reference_ssim(&a, &b)).abs() < 1e-9);
    }

    #[test]
    fn ssim_rejects_small_images() {
        let a = ImageF::zeros(10, 40, 3);
        assert!(matches!(ssim(&a, &a), Err(Error::Shape(_))));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn metric_symmetry_and_bounds(s1 in any::<u64>(), s2 in any::<u64>()) {
            let a = random(16, 14, s1);
            let b = random(16, 14, s2);
            let ab = ssim(&a, &b).unwrap();
            prop_assert!(ab <= 1.0);
            prop_assert!((ab - ssim(&b, &a).unwrap()).abs() < 1e-9);
            prop_assert_eq!(psnr(&a, &b).unwrap(), psnr(&b, &a).unwrap());
        }

        #[test]
        fn psnr_decreases_with_offset(d1 in 0.001f64..0.2, d2 in 0.001f64..0.2) {
            let a = ImageF::filled(4, 4, 3, 0.3);
            let (lo, hi) = if d1 < d2 { (d1, d2) } else { (d2, d1) };
            let p_lo = psnr(&a, &a.map(|v| v + lo)).unwrap();
            let p_hi = psnr(&a, &a.map(|v| v + hi)).unwrap();
            prop_assert!(p_hi <= p_lo);
        }
    }
}
