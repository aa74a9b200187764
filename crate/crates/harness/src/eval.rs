//! Batch runs over a manifest.
//!
//! Entries are processed in parallel; rows are collected in manifest order so
//! reports do not depend on scheduling.

use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use rayon::prelude::*;
use tagc::metrics::MetricSelection;
use tagc::{enhance, fixed_gamma_baseline, load_image, niqe_score, save_image, Config, Image, NiqeModel, QualityScores};

use crate::error::{HarnessError, Result};
use crate::manifest::{DatasetManifest, ManifestEntry, Mode};
use crate::report::{EvalReport, ImageRow, MetricMeans};

/// How each low-light input is turned into the image that gets scored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EvalMethod {
    Tagc(Config),
    /// Plain gamma correction with a constant gamma; `2.0` leaves inputs unchanged.
    FixedGamma(f64),
}

impl Default for EvalMethod {
    fn default() -> Self {
        EvalMethod::Tagc(Config::default())
    }
}

impl EvalMethod {
    /// Row label used in summary tables.
    pub fn label(&self) -> String {
        match self {
            EvalMethod::Tagc(_) => "TAGC".into(),
            EvalMethod::FixedGamma(g) => format!("GC (γ = {g})"),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            EvalMethod::Tagc(cfg) => format!("TAGC, γc = {}, A = {}", cfg.gamma_control, cfg.amplitude),
            EvalMethod::FixedGamma(g) => format!("fixed gamma {g}"),
        }
    }

    /// Enhanced image and the gamma that produced it.
    pub fn apply(&self, img: &Image) -> tagc::Result<(Image, f64)> {
        match self {
            EvalMethod::Tagc(cfg) => enhance(img, cfg).map(|(out, a)| (out, a.gamma)),
            EvalMethod::FixedGamma(g) => fixed_gamma_baseline(img, *g).map(|out| (out, *g)),
        }
    }
}

/// Dispatches on the manifest mode.
pub fn run_eval(manifest: &DatasetManifest, method: &EvalMethod, out_dir: Option<&Path>) -> Result<EvalReport> {
    match manifest.mode {
        Mode::Paired => run_paired_eval(manifest, method, out_dir),
        Mode::Unpaired => run_unpaired_eval(manifest, method, out_dir),
    }
}

/// Enhances every low-light input and scores it against its ground truth
/// with PSNR, SSIM and FSIM.
pub fn run_paired_eval(manifest: &DatasetManifest, method: &EvalMethod, out_dir: Option<&Path>) -> Result<EvalReport> {
    expect_mode(manifest, Mode::Paired)?;
    prepare_out_dir(out_dir)?;
    run(manifest, method, |entry| {
        let low: Image = load_image(&entry.low)?;
        let gt_path = entry.gt.as_ref().expect("paired entries carry ground truth");
        let gt: Image = load_image(gt_path)?;
        let (out, gamma) = method.apply(&low)?;
        save_output(out_dir, entry, &out)?;
        let scores = QualityScores::compute(&gt, &out, MetricSelection::ALL)?;
        Ok(ImageRow {
            image: entry.id.clone(),
            gamma: Some(gamma),
            psnr: scores.psnr,
            ssim: scores.ssim,
            fsim: scores.fsim,
            ..Default::default()
        })
    })
}

/// Enhances every low-light input and scores it with NIQE against the
/// manifest's pristine model.
pub fn run_unpaired_eval(manifest: &DatasetManifest, method: &EvalMethod, out_dir: Option<&Path>) -> Result<EvalReport> {
    expect_mode(manifest, Mode::Unpaired)?;
    let model_path = manifest
        .niqe_model_path
        .as_ref()
        .expect("validated unpaired manifests name a model");
    let model = NiqeModel::load(model_path)?;
    prepare_out_dir(out_dir)?;
    run(manifest, method, |entry| {
        let low: Image = load_image(&entry.low)?;
        let (out, gamma) = method.apply(&low)?;
        save_output(out_dir, entry, &out)?;
        Ok(ImageRow {
            image: entry.id.clone(),
            gamma: Some(gamma),
            niqe: Some(niqe_score(&out, &model)?),
            ..Default::default()
        })
    })
}

/// Per-metric mean of the dataset aggregates, as in a cross-dataset
/// `Average` column.
pub fn cross_dataset_average(reports: &[EvalReport]) -> MetricMeans {
    let all: Vec<MetricMeans> = reports.iter().map(|r| r.aggregate).collect();
    MetricMeans::mean_of(&all)
}

fn expect_mode(manifest: &DatasetManifest, expected: Mode) -> Result<()> {
    if manifest.mode == expected {
        Ok(())
    } else {
        Err(HarnessError::Mode {
            dataset: manifest.name.clone(),
            expected: expected.as_str(),
            found: manifest.mode.as_str(),
        })
    }
}

fn prepare_out_dir(out_dir: Option<&Path>) -> Result<()> {
    if let Some(dir) = out_dir {
        std::fs::create_dir_all(dir).map_err(|source| HarnessError::Write {
            path: dir.to_path_buf(),
            source,
        })?;
    }
    Ok(())
}

/// Output file for an entry: the input's file stem with a `.png` extension.
pub fn output_path(out_dir: &Path, entry: &ManifestEntry) -> PathBuf {
    let stem = entry
        .low
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "image".into());
    out_dir.join(format!("{stem}.png"))
}

fn save_output(out_dir: Option<&Path>, entry: &ManifestEntry, img: &Image) -> tagc::Result<()> {
    match out_dir {
        Some(dir) => save_image(img, output_path(dir, entry)),
        None => Ok(()),
    }
}

fn run(
    manifest: &DatasetManifest,
    method: &EvalMethod,
    score: impl Fn(&ManifestEntry) -> tagc::Result<ImageRow> + Sync,
) -> Result<EvalReport> {
    let rows: Vec<ImageRow> = manifest
        .entries
        .par_iter()
        .map(|entry| {
            score(entry).unwrap_or_else(|e| ImageRow {
                image: entry.id.clone(),
                error: Some(format!("{}: {e}", e.kind())),
                ..Default::default()
            })
        })
        .collect();

    if rows.iter().all(|r| r.error.is_some()) {
        return Err(HarnessError::AllFailed {
            dataset: manifest.name.clone(),
            first: rows[0].error.clone().unwrap_or_default(),
        });
    }
    let created_unix = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    Ok(EvalReport {
        dataset: manifest.name.clone(),
        mode: manifest.mode,
        method: *method,
        created_unix,
        aggregate: MetricMeans::from_rows(&rows),
        rows,
    })
}
