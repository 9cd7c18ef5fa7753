use rayon::prelude::*;

use super::{GaussianKernel, ImageF};

/// Mirrors an out-of-range index back into `0..n` without repeating the edge
/// sample (`-1 -> 1`, `n -> n - 2`). Works for offsets of any magnitude.
#[inline]
pub fn reflect_index(i: isize, n: usize) -> usize {
    if n == 1 {
        return 0;
    }
    if i >= 0 && (i as usize) < n {
        return i as usize;
    }
    let period = 2 * (n as isize - 1);
    let m = i.rem_euclid(period);
    if m < n as isize {
        m as usize
    } else {
        (period - m) as usize
    }
}

/// Bounding box `(x0, x1, y0, y1)` (inclusive) of the nonzero samples.
fn support(src: &[f64], width: usize, height: usize) -> Option<(usize, usize, usize, usize)> {
    let mut bbox: Option<(usize, usize, usize, usize)> = None;
    for y in 0..height {
        let row = &src[y * width..(y + 1) * width];
        let Some(first) = row.iter().position(|&v| v != 0.0) else { continue };
        let last = row.iter().rposition(|&v| v != 0.0).unwrap_or(first);
        bbox = Some(match bbox {
            None => (first, last, y, y),
            Some((x0, x1, y0, _)) => (x0.min(first), x1.max(last), y0, y),
        });
    }
    bbox
}

fn horizontal_row(row: &[f64], weights: &[f64], radius: usize, xs: std::ops::RangeInclusive<usize>, out: &mut [f64]) {
    let n = row.len();
    let x_start = *xs.start();
    for x in xs {
        let acc = if x >= radius && x + radius < n {
            row[x - radius..=x + radius].iter().zip(weights).map(|(v, w)| v * w).sum()
        } else {
            let mut acc = 0.0;
            for (t, w) in weights.iter().enumerate() {
                acc += w * row[reflect_index(x as isize + t as isize - radius as isize, n)];
            }
            acc
        };
        out[x - x_start] = acc;
    }
}

/// Separable Gaussian convolution of one plane with reflect padding.
///
/// Only the bounding box of the nonzero input, dilated by the kernel radius,
/// can receive nonzero output; everything else is left at zero. Sparse inputs
/// such as a single disc therefore cost only their footprint.
pub fn convolve_plane(src: &[f64], width: usize, height: usize, kernel: &GaussianKernel) -> Vec<f64> {
    assert_eq!(src.len(), width * height, "plane length does not match dimensions");
    if kernel.is_identity() {
        return src.to_vec();
    }
    let mut out = vec![0.0; width * height];
    let Some((x0, x1, y0, y1)) = support(src, width, height) else {
        return out;
    };
    let r = kernel.radius();
    let w = kernel.weights();
    let ox0 = x0.saturating_sub(r);
    let ox1 = (x1 + r).min(width - 1);
    let oy0 = y0.saturating_sub(r);
    let oy1 = (y1 + r).min(height - 1);
    let box_w = ox1 - ox0 + 1;

    // Horizontal pass over the rows that carry input.
    let mut tmp = vec![0.0; (y1 - y0 + 1) * box_w];
    tmp.par_chunks_mut(box_w).enumerate().for_each(|(i, dst)| {
        let y = y0 + i;
        horizontal_row(&src[y * width..(y + 1) * width], w, r, ox0..=ox1, dst);
    });

    // Vertical pass as row-wise accumulation; rows outside y0..=y1 are zero.
    out[oy0 * width..(oy1 + 1) * width].par_chunks_mut(width).enumerate().for_each(|(i, dst)| {
        let y = oy0 + i;
        let dst = &mut dst[ox0..=ox1];
        for (t, wt) in w.iter().enumerate() {
            let sy = reflect_index(y as isize + t as isize - r as isize, height);
            if sy < y0 || sy > y1 {
                continue;
            }
            let row = &tmp[(sy - y0) * box_w..(sy - y0 + 1) * box_w];
            for (d, s) in dst.iter_mut().zip(row) {
                *d += wt * s;
            }
        }
    });
    out
}

/// Per-channel separable Gaussian convolution (horizontal, then vertical)
/// with reflect padding. Output has the input's dimensions.
pub fn convolve_gaussian(img: &ImageF, kernel: &GaussianKernel) -> ImageF {
    let (width, height, channels) = img.dims();
    let planes: Vec<Vec<f64>> =
        (0..channels).into_par_iter().map(|c| convolve_plane(img.plane(c), width, height, kernel)).collect();
    ImageF::new(width, height, channels, planes.concat()).expect("convolution preserves dimensions")
}
