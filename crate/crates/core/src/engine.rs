//! The TAGC enhancement: global statistics, one adaptive gamma, power law.
//!
//! ```text
//! L     = 0.2126 R̄ + 0.7152 Ḡ + 0.0722 B̄
//! mu    = (R̄ + Ḡ + B̄) / 3
//! gamma = gamma_c + (0.5 - L)(1 - mu) - 2L
//! out   = A * in^(2 / gamma)
//! ```

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::image::{channel_means, clamp_unit, ChannelStats, ImagePlanar, LUMA_WEIGHTS};
use crate::scalar::Scalar;

/// Planes at least this large are mapped in parallel row bands.
const PARALLEL_THRESHOLD: usize = 1 << 16;

fn positive_finite<T: Scalar>(v: T) -> bool {
    v.is_finite() && v > T::zero()
}

/// Tunables of the enhancement.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct EnhancementConfig<T = f64> {
    /// Offset of the adaptive gamma (`gamma_c`).
    pub gamma_control: T,
    /// Output gain (`A`).
    pub amplitude: T,
}

impl<T: Scalar> Default for EnhancementConfig<T> {
    fn default() -> Self {
        Self {
            gamma_control: T::lit(5.0),
            amplitude: T::one(),
        }
    }
}

impl<T: Scalar> EnhancementConfig<T> {
    /// Smallest `gamma_control` that is rejected: at `L = 1, mu = 0` the
    /// adaptive gamma equals `gamma_control - 2.5`.
    pub const MIN_GAMMA_CONTROL: f64 = 2.5;

    pub fn new(gamma_control: T, amplitude: T) -> Result<Self> {
        let cfg = Self {
            gamma_control,
            amplitude,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Checks that the configuration yields a positive gamma for every image.
    pub fn validate(&self) -> Result<()> {
        if !positive_finite(self.amplitude) {
            return Err(Error::Config(format!(
                "amplitude must be positive and finite, got {}",
                self.amplitude
            )));
        }
        if !(self.gamma_control.is_finite() && self.gamma_control > T::lit(Self::MIN_GAMMA_CONTROL)) {
            return Err(Error::Config(format!(
                "gamma_control must exceed {} so gamma stays positive, got {}",
                Self::MIN_GAMMA_CONTROL,
                self.gamma_control
            )));
        }
        Ok(())
    }
}

/// Per-image scalars computed by [`enhance`].
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct TagcAnalysis<T = f64> {
    pub stats: ChannelStats<T>,
    /// Luminance factor `L`.
    pub luminance: T,
    /// Average color factor `mu`.
    pub avg_color: T,
    /// Adaptive gamma.
    pub gamma: T,
}

/// Rec.709-weighted sum of the channel means.
pub fn luminance_factor<T: Scalar>(stats: &ChannelStats<T>) -> T {
    let [wr, wg, wb] = LUMA_WEIGHTS.map(T::lit);
    wr * stats.mean_r + wg * stats.mean_g + wb * stats.mean_b
}

/// Mean of the three channel means.
pub fn average_color_factor<T: Scalar>(stats: &ChannelStats<T>) -> T {
    (stats.mean_r + stats.mean_g + stats.mean_b) / T::lit(3.0)
}

/// `gamma_control + (0.5 - L)(1 - mu) - 2L`.
///
/// Fails if the result is not strictly positive, since the power law divides
/// by gamma.
pub fn adaptive_gamma<T: Scalar>(luminance: T, avg_color: T, cfg: &EnhancementConfig<T>) -> Result<T> {
    let half = T::lit(0.5);
    let two = T::lit(2.0);
    let gamma = cfg.gamma_control + (half - luminance) * (T::one() - avg_color) - two * luminance;
    if gamma > T::zero() && gamma.is_finite() {
        Ok(gamma)
    } else {
        Err(Error::Config(format!(
            "gamma_control {} yields non-positive gamma {gamma} (L = {luminance}, mu = {avg_color})",
            cfg.gamma_control
        )))
    }
}

/// Maps every sample `v` to `amplitude * v^(2 / gamma)`, clamped into `[0, 1]`.
pub fn apply_gamma<T: Scalar>(img: &ImagePlanar<T>, gamma: T, amplitude: T) -> Result<ImagePlanar<T>> {
    if !positive_finite(gamma) {
        return Err(Error::Config(format!("gamma must be positive, got {gamma}")));
    }
    if !positive_finite(amplitude) {
        return Err(Error::Config(format!("amplitude must be positive, got {amplitude}")));
    }
    let exponent = T::lit(2.0) / gamma;
    let map = |v: T| clamp_unit(amplitude * v.powf(exponent));

    let width = img.width();
    let planes = img
        .planes()
        .iter()
        .map(|src| {
            let mut dst = src.clone();
            if dst.len() >= PARALLEL_THRESHOLD {
                let band = width * 16;
                dst.par_chunks_mut(band)
                    .for_each(|chunk| chunk.iter_mut().for_each(|v| *v = map(*v)));
            } else {
                dst.iter_mut().for_each(|v| *v = map(*v));
            }
            dst
        })
        .collect();
    Ok(ImagePlanar::from_planes_unchecked(img.width(), img.height(), planes))
}

/// Computes the image statistics and the adaptive gamma without touching pixels.
pub fn analyze<T: Scalar>(img: &ImagePlanar<T>, cfg: &EnhancementConfig<T>) -> Result<TagcAnalysis<T>> {
    cfg.validate()?;
    let stats = channel_means(img);
    let luminance = luminance_factor(&stats);
    let avg_color = average_color_factor(&stats);
    let gamma = adaptive_gamma(luminance, avg_color, cfg)?;
    Ok(TagcAnalysis {
        stats,
        luminance,
        avg_color,
        gamma,
    })
}

/// Enhances a low-light image with a single image-wide adaptive gamma.
///
/// The same gamma is applied independently to every channel.
pub fn enhance<T: Scalar>(
    img: &ImagePlanar<T>,
    cfg: &EnhancementConfig<T>,
) -> Result<(ImagePlanar<T>, TagcAnalysis<T>)> {
    let analysis = analyze(img, cfg)?;
    let out = apply_gamma(img, analysis.gamma, cfg.amplitude)?;
    Ok((out, analysis))
}

/// Conventional gamma correction with a constant gamma and unit amplitude.
pub fn fixed_gamma_baseline<T: Scalar>(img: &ImagePlanar<T>, gamma: T) -> Result<ImagePlanar<T>> {
    apply_gamma(img, gamma, T::one())
}
