//! Feature similarity (FSIM): phase congruency from a log-Gabor filter bank
//! combined with Scharr gradient magnitude.

use std::f64::consts::PI;

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use super::check_same_size;
use crate::error::{Error, Result};
use crate::filter::{block_average, correlate_separable};
use crate::image::{gray_plane, ImagePlanar};
use crate::plane::Plane;
use crate::scalar::Scalar;

/// FSIM parameters. Defaults follow the original metric: 4 scales, 4
/// orientations, smallest wavelength 6, `T1 = 0.85`, `T2 = 160` on the
/// `[0, 255]` scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FsimConfig {
    pub scales: usize,
    pub orientations: usize,
    pub min_wavelength: f64,
    pub scale_factor: f64,
    /// Bandwidth of each log-Gabor filter relative to its center frequency.
    pub sigma_on_f: f64,
    /// Angular spacing of the orientations over the angular Gaussian spread.
    pub d_theta_on_sigma: f64,
    /// Noise threshold in standard deviations above the mean noise energy.
    pub noise_k: f64,
    pub t1: f64,
    pub t2: f64,
    /// Average-pool by `max(1, round(min(h, w) / 256))` before analysis.
    pub downsample: bool,
}

impl Default for FsimConfig {
    fn default() -> Self {
        Self {
            scales: 4,
            orientations: 4,
            min_wavelength: 6.0,
            scale_factor: 2.0,
            sigma_on_f: 0.55,
            d_theta_on_sigma: 1.2,
            noise_k: 2.0,
            t1: 0.85,
            t2: 160.0,
            downsample: true,
        }
    }
}

/// FSIM of the grayscale versions of two images, in `[0, 1]`.
pub fn fsim<T: Scalar>(reference: &ImagePlanar<T>, test: &ImagePlanar<T>) -> Result<f64> {
    fsim_with(reference, test, &FsimConfig::default())
}

pub fn fsim_with<T: Scalar>(
    reference: &ImagePlanar<T>,
    test: &ImagePlanar<T>,
    cfg: &FsimConfig,
) -> Result<f64> {
    check_same_size(reference, test)?;
    if cfg.scales == 0 || cfg.orientations == 0 {
        return Err(Error::Config("FSIM needs at least one scale and orientation".into()));
    }
    let mut x = gray_plane(reference, 255.0);
    let mut y = gray_plane(test, 255.0);
    if cfg.downsample {
        let factor = ((x.width().min(x.height()) as f64 / 256.0).round() as usize).max(1);
        x = block_average(&x, factor);
        y = block_average(&y, factor);
    }
    if x.width() < 2 || x.height() < 2 {
        return Err(Error::Shape(format!(
            "FSIM needs at least 2x2 pixels after pooling, got {}x{}",
            x.width(),
            x.height()
        )));
    }

    let bank = FilterBank::new(x.width(), x.height(), cfg);
    let pc_x = bank.phase_congruency(&x, cfg);
    let pc_y = bank.phase_congruency(&y, cfg);
    let gm_x = gradient_magnitude(&x);
    let gm_y = gradient_magnitude(&y);

    let similarity = |a: f64, b: f64, t: f64| (2.0 * (a * b) + t) / (a * a + b * b + t);
    let mut num = 0.0;
    let mut den = 0.0;
    for i in 0..x.data().len() {
        let (p, q) = (pc_x.data()[i], pc_y.data()[i]);
        let weight = p.max(q);
        let s = similarity(p, q, cfg.t1) * similarity(gm_x.data()[i], gm_y.data()[i], cfg.t2);
        num += s * weight;
        den += weight;
    }
    Ok(num / den)
}

/// Phase congruency map of a plane (values on any intensity scale).
pub fn phase_congruency(plane: &Plane, cfg: &FsimConfig) -> Plane {
    FilterBank::new(plane.width(), plane.height(), cfg).phase_congruency(plane, cfg)
}

/// Scharr gradient magnitude with reflected borders.
fn gradient_magnitude(plane: &Plane) -> Plane {
    let smooth = [3.0 / 16.0, 10.0 / 16.0, 3.0 / 16.0];
    let diff = [1.0, 0.0, -1.0];
    let gx = correlate_separable(plane, &diff, &smooth);
    let gy = correlate_separable(plane, &smooth, &diff);
    gx.zip_map(&gy, |a, b| (a * a + b * b).sqrt())
}

/// Frequency-domain log-Gabor filters, one per (orientation, scale), laid
/// out with zero frequency at index 0.
struct FilterBank {
    width: usize,
    height: usize,
    /// `filters[o][s]`
    filters: Vec<Vec<Vec<f64>>>,
}

/// Normalized frequency coordinates of an axis before the quadrant shift.
fn frequency_axis(n: usize) -> Vec<f64> {
    if n % 2 == 1 {
        let half = (n - 1) as f64 / 2.0;
        (0..n).map(|i| (i as f64 - half) / (n - 1) as f64).collect()
    } else {
        let half = (n / 2) as f64;
        (0..n).map(|i| (i as f64 - half) / n as f64).collect()
    }
}

/// Moves the centered spectrum so the zero frequency lands at index 0.
fn ifftshift(data: &[f64], width: usize, height: usize) -> Vec<f64> {
    let (sx, sy) = (width / 2, height / 2);
    let mut out = vec![0.0; data.len()];
    for y in 0..height {
        for x in 0..width {
            out[y * width + x] = data[((y + sy) % height) * width + (x + sx) % width];
        }
    }
    out
}

impl FilterBank {
    fn new(width: usize, height: usize, cfg: &FsimConfig) -> Self {
        let xs = frequency_axis(width);
        let ys = frequency_axis(height);
        let n = width * height;
        let mut radius = Vec::with_capacity(n);
        let mut theta = Vec::with_capacity(n);
        for &fy in &ys {
            for &fx in &xs {
                radius.push((fx * fx + fy * fy).sqrt());
                theta.push((-fy).atan2(fx));
            }
        }
        // Butterworth low-pass, cutoff 0.45, order 15.
        let lowpass: Vec<f64> = radius
            .iter()
            .map(|r| 1.0 / (1.0 + (r / 0.45).powi(30)))
            .collect();
        let lowpass = ifftshift(&lowpass, width, height);
        let mut radius = ifftshift(&radius, width, height);
        let theta = ifftshift(&theta, width, height);
        radius[0] = 1.0;

        let log_sigma_sq = 2.0 * cfg.sigma_on_f.ln().powi(2);
        let radial: Vec<Vec<f64>> = (0..cfg.scales)
            .map(|s| {
                let wavelength = cfg.min_wavelength * cfg.scale_factor.powi(s as i32);
                let f0 = 1.0 / wavelength;
                let mut g: Vec<f64> = radius
                    .iter()
                    .zip(&lowpass)
                    .map(|(r, lp)| (-(r / f0).ln().powi(2) / log_sigma_sq).exp() * lp)
                    .collect();
                g[0] = 0.0;
                g
            })
            .collect();

        let theta_sigma = PI / cfg.orientations as f64 / cfg.d_theta_on_sigma;
        let filters = (0..cfg.orientations)
            .map(|o| {
                let angle = o as f64 * PI / cfg.orientations as f64;
                let (sa, ca) = angle.sin_cos();
                let spread: Vec<f64> = theta
                    .iter()
                    .map(|t| {
                        let (st, ct) = t.sin_cos();
                        let ds = st * ca - ct * sa;
                        let dc = ct * ca + st * sa;
                        let dt = ds.atan2(dc).abs();
                        (-dt * dt / (2.0 * theta_sigma * theta_sigma)).exp()
                    })
                    .collect();
                radial
                    .iter()
                    .map(|g| g.iter().zip(&spread).map(|(a, b)| a * b).collect())
                    .collect()
            })
            .collect();
        Self {
            width,
            height,
            filters,
        }
    }

    fn phase_congruency(&self, plane: &Plane, cfg: &FsimConfig) -> Plane {
        let (w, h) = (self.width, self.height);
        let n = w * h;
        let mut fft = Fft2::new(w, h);

        let mut spectrum: Vec<Complex64> = plane.data().iter().map(|&v| Complex64::new(v, 0.0)).collect();
        fft.forward(&mut spectrum);

        let mut energy_all = vec![0.0; n];
        let mut amplitude_all = vec![0.0; n];
        let sqrt_n = (n as f64).sqrt();

        for orient in &self.filters {
            let mut responses: Vec<Vec<Complex64>> = Vec::with_capacity(orient.len());
            let mut spatial_filters: Vec<Vec<f64>> = Vec::with_capacity(orient.len());
            for filter in orient {
                let mut eo: Vec<Complex64> =
                    spectrum.iter().zip(filter).map(|(s, f)| s * f).collect();
                fft.inverse(&mut eo);
                responses.push(eo);

                let mut f: Vec<Complex64> = filter.iter().map(|&v| Complex64::new(v, 0.0)).collect();
                fft.inverse(&mut f);
                spatial_filters.push(f.iter().map(|c| c.re * sqrt_n).collect());
            }

            let mut sum_e = vec![0.0; n];
            let mut sum_o = vec![0.0; n];
            for eo in &responses {
                for i in 0..n {
                    sum_e[i] += eo[i].re;
                    sum_o[i] += eo[i].im;
                    amplitude_all[i] += eo[i].norm();
                }
            }

            let mut energy = vec![0.0; n];
            for i in 0..n {
                let x_energy = (sum_e[i] * sum_e[i] + sum_o[i] * sum_o[i]).sqrt() + f64::EPSILON;
                let mean_e = sum_e[i] / x_energy;
                let mean_o = sum_o[i] / x_energy;
                for eo in &responses {
                    let (e, o) = (eo[i].re, eo[i].im);
                    energy[i] += e * mean_e + o * mean_o - (e * mean_o - o * mean_e).abs();
                }
            }

            // Noise level from the smallest scale: the squared response
            // amplitude of pure noise is Rayleigh distributed, so its mean
            // follows from the median.
            let mut small_sq: Vec<f64> = responses[0].iter().map(|c| c.norm_sqr()).collect();
            let mean_e2n = -median(&mut small_sq) / 0.5f64.ln();
            let em_n: f64 = orient[0].iter().map(|v| v * v).sum();
            let noise_power = mean_e2n / em_n;

            let sum_an2: f64 = spatial_filters.iter().flatten().map(|v| v * v).sum();
            let mut sum_ai_aj = 0.0;
            for si in 0..spatial_filters.len() {
                for sj in si + 1..spatial_filters.len() {
                    sum_ai_aj += spatial_filters[si]
                        .iter()
                        .zip(&spatial_filters[sj])
                        .map(|(a, b)| a * b)
                        .sum::<f64>();
                }
            }
            let noise_energy2 = 2.0 * noise_power * sum_an2 + 4.0 * noise_power * sum_ai_aj;
            let tau = (noise_energy2 / 2.0).sqrt();
            let noise_mean = tau * (PI / 2.0).sqrt();
            let noise_sigma = ((2.0 - PI / 2.0) * tau * tau).sqrt();
            // Empirical correction of the noise estimate for this energy measure.
            let threshold = (noise_mean + cfg.noise_k * noise_sigma) / 1.7;

            for i in 0..n {
                energy_all[i] += (energy[i] - threshold).max(0.0);
            }
        }

        let data = energy_all
            .iter()
            .zip(&amplitude_all)
            .map(|(e, a)| (e + f64::EPSILON) / (a + f64::EPSILON))
            .collect();
        Plane::from_vec(w, h, data)
    }
}

fn median(values: &mut [f64]) -> f64 {
    let n = values.len();
    let mid = n / 2;
    let (_, upper, _) = values.select_nth_unstable_by(mid, f64::total_cmp);
    let upper = *upper;
    if n % 2 == 1 {
        upper
    } else {
        let lower = values[..mid].iter().copied().fold(f64::NEG_INFINITY, f64::max);
        0.5 * (lower + upper)
    }
}

/// Unnormalized forward / normalized inverse 2-D FFT over a row-major buffer.
struct Fft2 {
    width: usize,
    height: usize,
    row_fwd: std::sync::Arc<dyn rustfft::Fft<f64>>,
    row_inv: std::sync::Arc<dyn rustfft::Fft<f64>>,
    col_fwd: std::sync::Arc<dyn rustfft::Fft<f64>>,
    col_inv: std::sync::Arc<dyn rustfft::Fft<f64>>,
    scratch: Vec<Complex64>,
}

impl Fft2 {
    fn new(width: usize, height: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            width,
            height,
            row_fwd: planner.plan_fft_forward(width),
            row_inv: planner.plan_fft_inverse(width),
            col_fwd: planner.plan_fft_forward(height),
            col_inv: planner.plan_fft_inverse(height),
            scratch: vec![Complex64::default(); width * height],
        }
    }

    fn forward(&mut self, data: &mut [Complex64]) {
        let (row, col) = (self.row_fwd.clone(), self.col_fwd.clone());
        self.run(data, &*row, &*col);
    }

    fn inverse(&mut self, data: &mut [Complex64]) {
        let (row, col) = (self.row_inv.clone(), self.col_inv.clone());
        self.run(data, &*row, &*col);
        let norm = 1.0 / (self.width * self.height) as f64;
        data.iter_mut().for_each(|v| *v *= norm);
    }

    fn run(&mut self, data: &mut [Complex64], row: &dyn rustfft::Fft<f64>, col: &dyn rustfft::Fft<f64>) {
        let (w, h) = (self.width, self.height);
        row.process(data);
        for y in 0..h {
            for x in 0..w {
                self.scratch[x * h + y] = data[y * w + x];
            }
        }
        col.process(&mut self.scratch);
        for x in 0..w {
            for y in 0..h {
                data[y * w + x] = self.scratch[x * h + y];
            }
        }
    }
}
