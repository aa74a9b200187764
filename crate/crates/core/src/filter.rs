//! Separable filtering and resampling on [`Plane`]s.
//!
//! Every windowed operation pads by half-sample symmetric reflection
//! (`... 2 1 0 | 0 1 2 ... n-1 | n-1 n-2 ...`).

use crate::plane::Plane;

/// Maps a possibly out-of-range index onto `0..n` by symmetric reflection.
pub(crate) fn reflect(i: isize, n: usize) -> usize {
    let n = n as isize;
    let period = 2 * n;
    let m = i.rem_euclid(period);
    (if m < n { m } else { period - 1 - m }) as usize
}

/// Normalized 1-D Gaussian of odd length `size`.
pub(crate) fn gaussian_kernel(size: usize, sigma: f64) -> Vec<f64> {
    assert!(size % 2 == 1, "kernel length must be odd");
    let half = (size / 2) as f64;
    let raw: Vec<f64> = (0..size)
        .map(|i| {
            let d = i as f64 - half;
            (-d * d / (2.0 * sigma * sigma)).exp()
        })
        .collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|w| w / total).collect()
}

/// Correlates `plane` with the outer product `ky ⊗ kx` (both odd length).
pub(crate) fn correlate_separable(plane: &Plane, kx: &[f64], ky: &[f64]) -> Plane {
    let (w, h) = (plane.width(), plane.height());
    let rx = (kx.len() / 2) as isize;
    let ry = (ky.len() / 2) as isize;

    let mut horizontal = vec![0.0; w * h];
    for y in 0..h {
        let row = plane.row(y);
        let out = &mut horizontal[y * w..(y + 1) * w];
        for (x, o) in out.iter_mut().enumerate() {
            let x = x as isize;
            *o = kx
                .iter()
                .enumerate()
                .map(|(k, wk)| wk * row[reflect(x + k as isize - rx, w)])
                .sum();
        }
    }

    let mut out = vec![0.0; w * h];
    for y in 0..h {
        let yi = y as isize;
        let dst = &mut out[y * w..(y + 1) * w];
        for (k, wk) in ky.iter().enumerate() {
            let src = reflect(yi + k as isize - ry, h);
            let src = &horizontal[src * w..(src + 1) * w];
            for (d, s) in dst.iter_mut().zip(src) {
                *d += wk * s;
            }
        }
    }
    Plane::from_vec(w, h, out)
}

/// Gaussian blur with a `size x size` window.
pub(crate) fn gaussian_blur(plane: &Plane, size: usize, sigma: f64) -> Plane {
    let k = gaussian_kernel(size, sigma);
    correlate_separable(plane, &k, &k)
}

fn cubic(x: f64) -> f64 {
    let a = x.abs();
    let a2 = a * a;
    let a3 = a2 * a;
    if a <= 1.0 {
        1.5 * a3 - 2.5 * a2 + 1.0
    } else if a <= 2.0 {
        -0.5 * a3 + 2.5 * a2 - 4.0 * a + 2.0
    } else {
        0.0
    }
}

/// Source indices and weights for each output sample of an antialiased
/// bicubic downscale by `scale < 1` along one axis.
fn resize_contributions(in_len: usize, scale: f64) -> Vec<Vec<(usize, f64)>> {
    let out_len = (in_len as f64 * scale).ceil() as usize;
    let kernel_width = 4.0 / scale;
    let taps = kernel_width.ceil() as isize + 2;
    (1..=out_len)
        .map(|x| {
            let u = x as f64 / scale + 0.5 * (1.0 - 1.0 / scale);
            let left = (u - kernel_width / 2.0).floor() as isize;
            let raw: Vec<(isize, f64)> = (0..taps)
                .map(|j| {
                    let idx = left + j;
                    (idx, scale * cubic(scale * (u - idx as f64)))
                })
                .collect();
            let total: f64 = raw.iter().map(|(_, w)| w).sum();
            raw.into_iter()
                .filter(|(_, w)| *w != 0.0)
                .map(|(idx, w)| (reflect(idx - 1, in_len), w / total))
                .collect()
        })
        .collect()
}

/// Halves both dimensions with an antialiased bicubic kernel, rows first.
pub(crate) fn resize_half(plane: &Plane) -> Plane {
    let (w, h) = (plane.width(), plane.height());
    let rows = resize_contributions(h, 0.5);
    let cols = resize_contributions(w, 0.5);
    let (ow, oh) = (cols.len(), rows.len());

    let mut vertical = vec![0.0; w * oh];
    for (oy, taps) in rows.iter().enumerate() {
        let dst = &mut vertical[oy * w..(oy + 1) * w];
        for &(sy, wt) in taps {
            for (d, s) in dst.iter_mut().zip(plane.row(sy)) {
                *d += wt * s;
            }
        }
    }

    let mut out = vec![0.0; ow * oh];
    for oy in 0..oh {
        let src = &vertical[oy * w..(oy + 1) * w];
        for (ox, taps) in cols.iter().enumerate() {
            out[oy * ow + ox] = taps.iter().map(|&(sx, wt)| wt * src[sx]).sum();
        }
    }
    Plane::from_vec(ow, oh, out)
}

/// Averages non-overlapping `factor x factor` blocks; a partial trailing
/// block is discarded.
pub(crate) fn block_average(plane: &Plane, factor: usize) -> Plane {
    if factor <= 1 {
        return plane.clone();
    }
    let (ow, oh) = (plane.width() / factor, plane.height() / factor);
    let norm = (factor * factor) as f64;
    let mut out = Vec::with_capacity(ow * oh);
    for by in 0..oh {
        for bx in 0..ow {
            let mut acc = 0.0;
            for y in by * factor..(by + 1) * factor {
                acc += plane.row(y)[bx * factor..(bx + 1) * factor].iter().sum::<f64>();
            }
            out.push(acc / norm);
        }
    }
    Plane::from_vec(ow, oh, out)
}
