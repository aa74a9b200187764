//! Structural similarity with a Gaussian window.

use super::check_same_size;
use crate::error::{Error, Result};
use crate::filter::gaussian_kernel;
use crate::filter::correlate_separable;
use crate::image::{gray_plane, ImagePlanar};
use crate::plane::Plane;
use crate::scalar::Scalar;

/// SSIM constants. Defaults are the usual 11x11 window with sigma 1.5,
/// `K1 = 0.01`, `K2 = 0.03` on a dynamic range of 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SsimConfig {
    pub window: usize,
    pub sigma: f64,
    pub k1: f64,
    pub k2: f64,
    pub dynamic_range: f64,
}

impl Default for SsimConfig {
    fn default() -> Self {
        Self {
            window: 11,
            sigma: 1.5,
            k1: 0.01,
            k2: 0.03,
            dynamic_range: 1.0,
        }
    }
}

impl SsimConfig {
    pub fn c1(&self) -> f64 {
        (self.k1 * self.dynamic_range).powi(2)
    }

    pub fn c2(&self) -> f64 {
        (self.k2 * self.dynamic_range).powi(2)
    }
}

/// Mean SSIM of the grayscale versions of two images.
pub fn ssim<T: Scalar>(reference: &ImagePlanar<T>, test: &ImagePlanar<T>) -> Result<f64> {
    ssim_with(reference, test, &SsimConfig::default())
}

pub fn ssim_with<T: Scalar>(
    reference: &ImagePlanar<T>,
    test: &ImagePlanar<T>,
    cfg: &SsimConfig,
) -> Result<f64> {
    Ok(ssim_map(reference, test, cfg)?.mean())
}

/// Per-pixel SSIM, one value per pixel (windows reflect at the borders).
pub fn ssim_map<T: Scalar>(
    reference: &ImagePlanar<T>,
    test: &ImagePlanar<T>,
    cfg: &SsimConfig,
) -> Result<Plane> {
    check_same_size(reference, test)?;
    if cfg.window.is_multiple_of(2) {
        return Err(Error::Config(format!("SSIM window must be odd, got {}", cfg.window)));
    }
    if reference.width() < cfg.window || reference.height() < cfg.window {
        return Err(Error::Shape(format!(
            "{}x{} image is smaller than the {}x{} SSIM window",
            reference.width(),
            reference.height(),
            cfg.window,
            cfg.window
        )));
    }
    let x = gray_plane(reference, 1.0);
    let y = gray_plane(test, 1.0);
    Ok(ssim_planes(&x, &y, cfg))
}

pub(crate) fn ssim_planes(x: &Plane, y: &Plane, cfg: &SsimConfig) -> Plane {
    let k = gaussian_kernel(cfg.window, cfg.sigma);
    let blur = |p: &Plane| correlate_separable(p, &k, &k);
    let mu_x = blur(x);
    let mu_y = blur(y);
    let e_xx = blur(&x.zip_map(x, |a, b| a * b));
    let e_yy = blur(&y.zip_map(y, |a, b| a * b));
    let e_xy = blur(&x.zip_map(y, |a, b| a * b));
    let (c1, c2) = (cfg.c1(), cfg.c2());

    let data = (0..x.data().len())
        .map(|i| {
            let (mx, my) = (mu_x.data()[i], mu_y.data()[i]);
            let mxy = mx * my;
            let (mxx, myy) = (mx * mx, my * my);
            let var_x = e_xx.data()[i] - mxx;
            let var_y = e_yy.data()[i] - myy;
            let cov = e_xy.data()[i] - mxy;
            ((2.0 * mxy + c1) * (2.0 * cov + c2)) / ((mxx + myy + c1) * (var_x + var_y + c2))
        })
        .collect();
    Plane::from_vec(x.width(), x.height(), data)
}
