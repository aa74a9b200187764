//! Tuned adaptive gamma correction (TAGC) for low-light images.
//!
//! The enhancement derives a single gamma for the whole image from two global
//! statistics, a Rec.709-weighted luminance factor and the average color, and
//! then applies the power law `A * v^(2/gamma)` to every sample.
//!
//! The crate also carries the quality metrics used to judge enhancement
//! results: PSNR, SSIM and FSIM (full reference) and NIQE (no reference, with
//! pristine-model fitting).
//!
//! Pixel storage is generic over the floating-point sample type. Metric
//! kernels always compute in `f64`.
//!
//! ```
//! use tagc::{enhance, EnhancementConfig, Image};
//!
//! let dark = Image::constant(4, 4, 3, 0.1).unwrap();
//! let (bright, analysis) = enhance(&dark, &EnhancementConfig::default()).unwrap();
//! assert!((analysis.gamma - 5.16).abs() < 1e-12);
//! assert!(bright.plane(0)[0] > 0.4);
//! ```

mod error;
mod filter;

pub mod engine;
pub mod image;
pub mod metrics;
pub mod plane;
pub mod scalar;

pub use crate::engine::{
    adaptive_gamma, analyze, apply_gamma, average_color_factor, enhance, fixed_gamma_baseline,
    luminance_factor, EnhancementConfig, TagcAnalysis,
};
pub use crate::error::{Error, Result};
pub use crate::image::{
    channel_means, load_image, save_image, to_grayscale, ChannelStats, ImagePlanar,
};
pub use crate::metrics::{
    fit_aggd, fit_niqe_model, fsim, mscn_coefficients, niqe_features, niqe_score, psnr, ssim,
    AggdFit, FsimConfig, NiqeConfig, NiqeModel, QualityScores, SsimConfig,
};
pub use crate::plane::Plane;
pub use crate::scalar::Scalar;

/// Double-precision image, the default working type.
pub type Image = ImagePlanar<f64>;
/// Single-precision image.
pub type ImageF32 = ImagePlanar<f32>;
/// Double-precision enhancement configuration.
pub type Config = EnhancementConfig<f64>;
/// Double-precision analysis record.
pub type Analysis = TagcAnalysis<f64>;
/// Double-precision channel means.
pub type Stats = ChannelStats<f64>;
