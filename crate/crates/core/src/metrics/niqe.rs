//! Natural Image Quality Evaluator (NIQE).
//!
//! Images are cut into square patches at two scales. For every patch the
//! MSCN coefficients and their four neighbor products are fitted with
//! AGGDs, giving 18 features per scale. A pristine model is the mean and
//! covariance of those features over sharp patches of high-quality photos;
//! the score of an image is the Mahalanobis-like distance between its own
//! feature statistics and the model.

use std::fs;
use std::path::{Path, PathBuf};

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::aggd::fit_aggd;
use crate::error::{Error, Result};
use crate::filter::{gaussian_blur, resize_half};
use crate::image::{gray_plane, load_image, ImagePlanar};
use crate::plane::Plane;
use crate::scalar::Scalar;

/// Version written into serialized models.
pub const NIQE_MODEL_VERSION: u32 = 1;

/// Features contributed by one scale.
const FEATURES_PER_SCALE: usize = 18;
const MSCN_WINDOW: usize = 7;
const MSCN_SIGMA: f64 = 7.0 / 6.0;

/// Patch geometry and the sharpness gate used when fitting a model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NiqeConfig {
    pub patch_size: usize,
    pub scales: usize,
    pub sharpness_fraction: f64,
}

impl Default for NiqeConfig {
    fn default() -> Self {
        Self {
            patch_size: 96,
            scales: 2,
            sharpness_fraction: 0.75,
        }
    }
}

impl NiqeConfig {
    pub fn feature_len(&self) -> usize {
        FEATURES_PER_SCALE * self.scales
    }

    pub fn validate(&self) -> Result<()> {
        if self.scales == 0 {
            return Err(Error::Config("NIQE needs at least one scale".into()));
        }
        let divisor = 1usize << (self.scales - 1);
        if self.patch_size == 0 || !self.patch_size.is_multiple_of(divisor) || self.patch_size / divisor < 2 {
            return Err(Error::Config(format!(
                "patch size {} must be a positive multiple of {divisor} (and at least {})",
                self.patch_size,
                2 * divisor
            )));
        }
        if !(0.0..=1.0).contains(&self.sharpness_fraction) {
            return Err(Error::Config(format!(
                "sharpness fraction {} must lie in [0, 1]",
                self.sharpness_fraction
            )));
        }
        Ok(())
    }
}

/// Which patches contribute features.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PatchSelection {
    /// Patches whose mean local deviation exceeds `sharpness_fraction` of the
    /// sharpest patch (used for pristine models).
    Sharpest,
    /// Every patch (used when scoring).
    All,
}

/// Pristine natural-scene statistics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NiqeModel {
    pub version: u32,
    pub patch_size: usize,
    pub scales: usize,
    pub sharpness_fraction: f64,
    pub feature_mean: Vec<f64>,
    pub feature_cov: Vec<Vec<f64>>,
}

impl NiqeModel {
    pub fn config(&self) -> NiqeConfig {
        NiqeConfig {
            patch_size: self.patch_size,
            scales: self.scales,
            sharpness_fraction: self.sharpness_fraction,
        }
    }

    /// Mean and sample covariance of a pool of feature vectors.
    pub fn from_features(features: &[Vec<f64>], cfg: &NiqeConfig) -> Result<Self> {
        let len = cfg.feature_len();
        if features.len() < 2 {
            return Err(Error::EmptySelection(format!(
                "a model needs at least 2 patches, got {}",
                features.len()
            )));
        }
        if let Some(bad) = features.iter().find(|f| f.len() != len) {
            return Err(Error::Model(format!(
                "feature vector of length {}, expected {len}",
                bad.len()
            )));
        }
        let (mean, cov) = mean_and_cov(features);
        let model = Self {
            version: NIQE_MODEL_VERSION,
            patch_size: cfg.patch_size,
            scales: cfg.scales,
            sharpness_fraction: cfg.sharpness_fraction,
            feature_mean: mean.iter().copied().collect(),
            feature_cov: (0..len).map(|r| cov.row(r).iter().copied().collect()).collect(),
        };
        model.validate()?;
        Ok(model)
    }

    /// Checks dimensions, finiteness and symmetry.
    pub fn validate(&self) -> Result<()> {
        self.config().validate()?;
        let len = self.config().feature_len();
        if self.feature_mean.len() != len {
            return Err(Error::Model(format!(
                "feature_mean has {} entries, expected {len}",
                self.feature_mean.len()
            )));
        }
        if self.feature_cov.len() != len || self.feature_cov.iter().any(|r| r.len() != len) {
            return Err(Error::Model(format!("feature_cov must be {len}x{len}")));
        }
        let finite = self.feature_mean.iter().chain(self.feature_cov.iter().flatten()).all(|v| v.is_finite());
        if !finite {
            return Err(Error::Model("non-finite statistics".into()));
        }
        for i in 0..len {
            for j in 0..i {
                let (a, b) = (self.feature_cov[i][j], self.feature_cov[j][i]);
                if (a - b).abs() > 1e-10 * (1.0 + a.abs().max(b.abs())) {
                    return Err(Error::Model(format!("feature_cov is not symmetric at ({i}, {j})")));
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let model: Self = serde_json::from_str(text).map_err(|e| Error::Model(e.to_string()))?;
        model.validate()?;
        Ok(model)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_json()).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text)
    }

    fn mean_vector(&self) -> DVector<f64> {
        DVector::from_column_slice(&self.feature_mean)
    }

    fn cov_matrix(&self) -> DMatrix<f64> {
        let n = self.feature_mean.len();
        DMatrix::from_fn(n, n, |r, c| self.feature_cov[r][c])
    }
}

fn mean_and_cov(features: &[Vec<f64>]) -> (DVector<f64>, DMatrix<f64>) {
    let len = features[0].len();
    let n = features.len() as f64;
    let mut mean = DVector::zeros(len);
    for f in features {
        for (m, v) in mean.iter_mut().zip(f) {
            *m += v;
        }
    }
    mean /= n;
    let mut cov = DMatrix::zeros(len, len);
    if features.len() > 1 {
        for f in features {
            for i in 0..len {
                let di = f[i] - mean[i];
                for j in 0..=i {
                    cov[(i, j)] += di * (f[j] - mean[j]);
                }
            }
        }
        cov /= n - 1.0;
        for i in 0..len {
            for j in 0..i {
                cov[(j, i)] = cov[(i, j)];
            }
        }
    }
    (mean, cov)
}

/// MSCN coefficients and the local deviation map of a plane on the
/// `[0, 255]` scale.
fn mscn_and_sigma(plane: &Plane) -> (Plane, Plane) {
    let mu = gaussian_blur(plane, MSCN_WINDOW, MSCN_SIGMA);
    let sq = plane.map(|v| v * v);
    let mu_sq = gaussian_blur(&sq, MSCN_WINDOW, MSCN_SIGMA);
    let sigma = mu_sq.zip_map(&mu, |e2, m| (e2 - m * m).abs().sqrt());
    let mscn_data = plane
        .data()
        .iter()
        .zip(mu.data())
        .zip(sigma.data())
        .map(|((v, m), s)| (v - m) / (s + 1.0))
        .collect();
    (Plane::from_vec(plane.width(), plane.height(), mscn_data), sigma)
}

/// Mean-subtracted contrast-normalized coefficients of the grayscale image
/// on the `[0, 255]` scale.
pub fn mscn_coefficients<T: Scalar>(img: &ImagePlanar<T>) -> Plane {
    mscn_and_sigma(&gray_plane(img, 255.0)).0
}

/// AGGD features of one MSCN patch: shape and mean scale of the
/// coefficients, then shape, mean, left and right scale of each of the
/// horizontal, vertical and two diagonal neighbor products.
fn patch_features(patch: &Plane, out: &mut Vec<f64>) -> Result<()> {
    let fit = fit_aggd(patch.data())?;
    out.push(fit.shape);
    out.push((fit.left_scale + fit.right_scale) / 2.0);

    let (w, h) = (patch.width() as isize, patch.height() as isize);
    // Circular shifts (row, column) within the patch.
    const SHIFTS: [(isize, isize); 4] = [(0, 1), (1, 0), (1, 1), (1, -1)];
    let mut products = vec![0.0; patch.data().len()];
    for (dy, dx) in SHIFTS {
        for y in 0..h {
            let sy = (y - dy).rem_euclid(h) as usize;
            for x in 0..w {
                let sx = (x - dx).rem_euclid(w) as usize;
                products[(y * w + x) as usize] = patch.get(x as usize, y as usize) * patch.get(sx, sy);
            }
        }
        let fit = fit_aggd(&products)?;
        out.extend([fit.shape, fit.mean(), fit.left_scale, fit.right_scale]);
    }
    Ok(())
}

/// Per-patch feature vectors of an image. Patches whose distribution fit is
/// degenerate (e.g. perfectly flat regions) are skipped.
pub fn niqe_patch_features<T: Scalar>(
    img: &ImagePlanar<T>,
    cfg: &NiqeConfig,
    selection: PatchSelection,
) -> Result<Vec<Vec<f64>>> {
    cfg.validate()?;
    let p = cfg.patch_size;
    let (cols, rows) = (img.width() / p, img.height() / p);
    if cols == 0 || rows == 0 {
        return Err(Error::Shape(format!(
            "{}x{} image is smaller than one {p}x{p} patch",
            img.width(),
            img.height()
        )));
    }
    let mut plane = gray_plane(img, 255.0).crop(0, 0, cols * p, rows * p);

    let mut per_patch: Vec<Option<Vec<f64>>> = vec![Some(Vec::with_capacity(cfg.feature_len())); cols * rows];
    let mut keep = vec![true; cols * rows];
    for scale in 0..cfg.scales {
        let size = p >> scale;
        let (mscn, sigma) = mscn_and_sigma(&plane);
        if scale == 0 && selection == PatchSelection::Sharpest {
            let sharpness: Vec<f64> = (0..rows * cols)
                .map(|i| sigma.crop((i % cols) * p, (i / cols) * p, p, p).mean())
                .collect();
            let max = sharpness.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let gate = cfg.sharpness_fraction * max;
            for (k, s) in keep.iter_mut().zip(&sharpness) {
                *k = *s > gate;
            }
        }
        per_patch
            .par_iter_mut()
            .enumerate()
            .filter(|(i, _)| keep[*i])
            .for_each(|(i, slot)| {
                if let Some(features) = slot {
                    let patch = mscn.crop((i % cols) * size, (i / cols) * size, size, size);
                    if patch_features(&patch, features).is_err() {
                        *slot = None;
                    }
                }
            });
        if scale + 1 < cfg.scales {
            plane = resize_half(&plane);
        }
    }

    let features: Vec<Vec<f64>> = per_patch
        .into_iter()
        .zip(keep)
        .filter_map(|(f, k)| if k { f } else { None })
        .collect();
    if features.is_empty() {
        return Err(Error::EmptySelection(format!(
            "none of the {} patches of a {}x{} image is usable",
            cols * rows,
            img.width(),
            img.height()
        )));
    }
    Ok(features)
}

/// Sharpness-gated per-patch features, as used for pristine models.
pub fn niqe_features<T: Scalar>(img: &ImagePlanar<T>, cfg: &NiqeConfig) -> Result<Vec<Vec<f64>>> {
    niqe_patch_features(img, cfg, PatchSelection::Sharpest)
}

/// Fits a model from in-memory images.
pub fn fit_niqe_model_from_images<T: Scalar>(
    images: &[ImagePlanar<T>],
    cfg: &NiqeConfig,
) -> Result<NiqeModel> {
    let pooled: Vec<Vec<f64>> = images
        .iter()
        .filter_map(|img| niqe_features(img, cfg).ok())
        .flatten()
        .collect();
    NiqeModel::from_features(&pooled, cfg)
}

/// Image files in a directory, sorted by name.
fn list_images(dir: &Path) -> Result<Vec<PathBuf>> {
    let io = |source| Error::Io {
        path: dir.to_path_buf(),
        source,
    };
    let mut paths = Vec::new();
    for entry in fs::read_dir(dir).map_err(io)? {
        let path = entry.map_err(io)?.path();
        if path.is_file() {
            paths.push(path);
        }
    }
    paths.sort();
    Ok(paths)
}

/// Fits a pristine model from every decodable image in `dir`.
///
/// Files that fail to decode or yield no sharp patch are skipped.
pub fn fit_niqe_model(dir: impl AsRef<Path>, cfg: &NiqeConfig) -> Result<NiqeModel> {
    let dir = dir.as_ref();
    cfg.validate()?;
    let paths = list_images(dir)?;
    let per_image: Vec<Vec<Vec<f64>>> = paths
        .par_iter()
        .map(|path| {
            load_image::<f64>(path)
                .and_then(|img| niqe_features(&img, cfg))
                .unwrap_or_default()
        })
        .collect();
    let pooled: Vec<Vec<f64>> = per_image.into_iter().flatten().collect();
    if pooled.len() < 2 {
        return Err(Error::EmptyCorpus(dir.to_path_buf()));
    }
    NiqeModel::from_features(&pooled, cfg)
}

/// Distance between a model and the statistics of a pool of test features.
pub fn niqe_distance(model: &NiqeModel, features: &[Vec<f64>]) -> Result<f64> {
    let len = model.feature_mean.len();
    if features.is_empty() {
        return Err(Error::EmptySelection("no test features".into()));
    }
    if let Some(bad) = features.iter().find(|f| f.len() != len) {
        return Err(Error::Model(format!(
            "feature vector of length {}, expected {len}",
            bad.len()
        )));
    }
    let (mean, cov) = mean_and_cov(features);
    let diff = model.mean_vector() - mean;
    let pooled = (model.cov_matrix() + cov) / 2.0;
    let solved = match pooled.clone().cholesky() {
        Some(chol) => chol.solve(&diff),
        None => {
            let pinv = pooled
                .pseudo_inverse(1e-12)
                .map_err(|e| Error::Model(format!("pseudo-inverse failed: {e}")))?;
            pinv * &diff
        }
    };
    Ok(diff.dot(&solved).max(0.0).sqrt())
}

/// NIQE score of an image; lower is better.
pub fn niqe_score<T: Scalar>(img: &ImagePlanar<T>, model: &NiqeModel) -> Result<f64> {
    let features = niqe_patch_features(img, &model.config(), PatchSelection::All)?;
    niqe_distance(model, &features)
}
