//! Image quality metrics.
//!
//! Full-reference metrics compare an enhanced image with its ground truth;
//! NIQE scores an image against a pristine natural-scene model. All kernels
//! compute in `f64`; SSIM, FSIM and NIQE work on the Rec.709 grayscale.

mod aggd;
mod fsim;
mod niqe;
mod psnr;
mod ssim;

pub use aggd::{fit_aggd, AggdFit};
pub use fsim::{fsim, fsim_with, phase_congruency, FsimConfig};
pub use niqe::{
    fit_niqe_model, fit_niqe_model_from_images, mscn_coefficients, niqe_distance, niqe_features,
    niqe_patch_features, niqe_score, NiqeConfig, NiqeModel, PatchSelection,
    NIQE_MODEL_VERSION,
};
pub use psnr::{mse, psnr};
pub use ssim::{ssim, ssim_map, ssim_with, SsimConfig};

use crate::error::{Error, Result};
use crate::image::ImagePlanar;
use crate::scalar::Scalar;

/// Full-reference scores of one image pair; `None` means not requested.
///
/// PSNR is `f64::INFINITY` when the images are identical.
#[derive(Debug, Clone, Copy, Default, PartialEq, serde::Serialize)]
pub struct QualityScores {
    pub psnr: Option<f64>,
    pub ssim: Option<f64>,
    pub fsim: Option<f64>,
}

/// Which full-reference metrics to compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MetricSelection {
    pub psnr: bool,
    pub ssim: bool,
    pub fsim: bool,
}

impl MetricSelection {
    pub const ALL: Self = Self {
        psnr: true,
        ssim: true,
        fsim: true,
    };
}

impl QualityScores {
    pub fn compute<T: Scalar>(
        reference: &ImagePlanar<T>,
        test: &ImagePlanar<T>,
        which: MetricSelection,
    ) -> Result<Self> {
        Ok(Self {
            psnr: which.psnr.then(|| psnr(reference, test)).transpose()?,
            ssim: which.ssim.then(|| ssim(reference, test)).transpose()?,
            fsim: which.fsim.then(|| fsim(reference, test)).transpose()?,
        })
    }
}

pub(crate) fn check_same_size<T: Scalar>(a: &ImagePlanar<T>, b: &ImagePlanar<T>) -> Result<()> {
    if a.width() != b.width() || a.height() != b.height() {
        return Err(Error::Shape(format!(
            "{}x{} vs {}x{}",
            a.width(),
            a.height(),
            b.width(),
            b.height()
        )));
    }
    Ok(())
}
