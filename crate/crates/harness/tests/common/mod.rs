#![allow(dead_code)]

use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use tagc::{load_image, save_image, Image};

pub fn testdata() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../testdata")
}

pub fn photo_paths(sub: &str) -> Vec<PathBuf> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(testdata().join("photos").join(sub))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "png"))
        .collect();
    paths.sort();
    paths
}

/// Every fixture photo, pristine first.
pub fn all_photos() -> Vec<PathBuf> {
    let mut all = photo_paths("pristine");
    all.extend(photo_paths("clean"));
    all
}

/// Simulated low-light capture: an exposure cut, a steeper tone curve and a
/// little sensor noise.
pub fn darken(gt: &Image, seed: u64) -> Image {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let exposure = rng.random_range(0.12..0.3);
    let curve = rng.random_range(1.2..1.7);
    let noise = Normal::new(0.0, 0.004).unwrap();
    Image::from_fn(gt.width(), gt.height(), gt.channels(), |c, x, y| {
        (exposure * gt.get(c, x, y).powf(curve) + noise.sample(&mut rng)).clamp(0.0, 1.0)
    })
    .unwrap()
}

/// Writes `n` dark/ground-truth pairs built from the fixture photos into
/// `dir` and returns the manifest path.
pub fn dark_pair_manifest(dir: &Path, name: &str, n: usize) -> PathBuf {
    let photos = all_photos();
    assert!(n <= photos.len(), "only {} fixture photos", photos.len());
    std::fs::create_dir_all(dir.join("low")).unwrap();
    std::fs::create_dir_all(dir.join("high")).unwrap();
    let mut entries = Vec::new();
    for (i, src) in photos.iter().take(n).enumerate() {
        let gt: Image = load_image(src).unwrap();
        let file = src.file_name().unwrap().to_string_lossy().into_owned();
        save_image(&gt, dir.join("high").join(&file)).unwrap();
        save_image(&darken(&gt, i as u64), dir.join("low").join(&file)).unwrap();
        entries.push(serde_json::json!({ "low": format!("low/{file}"), "gt": format!("high/{file}") }));
    }
    let manifest = serde_json::json!({ "name": name, "mode": "paired", "entries": entries });
    let path = dir.join(format!("{name}.json"));
    std::fs::write(&path, serde_json::to_string_pretty(&manifest).unwrap()).unwrap();
    path
}

/// Unpaired manifest over dark versions of the clean photos, scored with the
/// frozen fixture model.
pub fn dark_unpaired_manifest(dir: &Path, name: &str) -> PathBuf {
    std::fs::create_dir_all(dir.join("low")).unwrap();
    let mut entries = Vec::new();
    for (i, src) in photo_paths("clean").iter().enumerate() {
        let img: Image = load_image(src).unwrap();
        let file = src.file_name().unwrap().to_string_lossy().into_owned();
        save_image(&darken(&img, 100 + i as u64), dir.join("low").join(&file)).unwrap();
        entries.push(serde_json::json!({ "low": format!("low/{file}") }));
    }
    let model = testdata().join("niqe/pristine_model.json");
    let manifest = serde_json::json!({
        "name": name,
        "mode": "unpaired",
        "niqe_model_path": model,
        "entries": entries,
    });
    let path = dir.join(format!("{name}.json"));
    std::fs::write(&path, serde_json::to_string_pretty(&manifest).unwrap()).unwrap();
    path
}
