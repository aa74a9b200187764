//! Metric values checked against independent oracles.

use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use tagc::metrics::{fsim_with, ssim_with};
use tagc::{fit_aggd, fsim, load_image, psnr, ssim, FsimConfig, Image, SsimConfig};

fn testdata() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../testdata")
}

fn random_image(rng: &mut ChaCha8Rng, w: usize, h: usize, channels: usize) -> Image {
    Image::from_fn(w, h, channels, |_, _, _| rng.random::<f64>()).unwrap()
}

/// Direct per-pixel SSIM: for every pixel, weighted moments over the full
/// 2-D Gaussian neighborhood with mirrored indices.
fn naive_ssim(x: &Image, y: &Image) -> f64 {
    let (w, h) = (x.width() as isize, x.height() as isize);
    let mirror = |i: isize, n: isize| -> usize {
        let mut i = i;
        while i < 0 || i >= n {
            i = if i < 0 { -i - 1 } else { 2 * n - 1 - i };
        }
        i as usize
    };
    let mut weights = [[0.0f64; 11]; 11];
    let mut total = 0.0;
    for (dy, row) in weights.iter_mut().enumerate() {
        for (dx, wgt) in row.iter_mut().enumerate() {
            let (a, b) = (dx as f64 - 5.0, dy as f64 - 5.0);
            *wgt = (-(a * a + b * b) / (2.0 * 1.5 * 1.5)).exp();
            total += *wgt;
        }
    }
    let (c1, c2) = (1e-4, 9e-4);
    let mut sum = 0.0;
    for py in 0..h {
        for px in 0..w {
            let (mut mx, mut my, mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0, 0.0, 0.0);
            for (dy, row) in weights.iter().enumerate() {
                for (dx, wgt) in row.iter().enumerate() {
                    let wgt = wgt / total;
                    let sx = mirror(px + dx as isize - 5, w);
                    let sy = mirror(py + dy as isize - 5, h);
                    let a = x.get(0, sx, sy);
                    let b = y.get(0, sx, sy);
                    mx += wgt * a;
                    my += wgt * b;
                    sxx += wgt * a * a;
                    syy += wgt * b * b;
                    sxy += wgt * a * b;
                }
            }
            let vx = sxx - mx * mx;
            let vy = syy - my * my;
            let cov = sxy - mx * my;
            sum += ((2.0 * mx * my + c1) * (2.0 * cov + c2))
                / ((mx * mx + my * my + c1) * (vx + vy + c2));
        }
    }
    sum / (w * h) as f64
}

#[test]
fn psnr_constant_offset_is_twenty_db() {
    let a = Image::constant(32, 24, 3, 0.5).unwrap();
    let b = Image::constant(32, 24, 3, 0.6).unwrap();
    let got = psnr(&a, &b).unwrap();
    assert!((got - 20.0).abs() < 1e-9, "{got}");
    assert_eq!(psnr(&b, &a).unwrap(), got);
}

#[test]
fn psnr_falls_as_noise_grows() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let base = random_image(&mut rng, 48, 48, 3);
    let mut last = f64::INFINITY;
    for sigma in [0.01, 0.05, 0.2] {
        let normal = Normal::new(0.0, sigma).unwrap();
        let noisy = Image::from_fn(48, 48, 3, |c, x, y| {
            (base.get(c, x, y) + normal.sample(&mut rng)).clamp(0.0, 1.0)
        })
        .unwrap();
        let p = psnr(&base, &noisy).unwrap();
        assert!(p < last, "sigma {sigma}: {p} !< {last}");
        last = p;
    }
}

#[test]
fn ssim_matches_naive_oracle_on_random_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..50 {
        let a = random_image(&mut rng, 16, 16, 1);
        let b = random_image(&mut rng, 16, 16, 1);
        let fast = ssim(&a, &b).unwrap();
        let slow = naive_ssim(&a, &b);
        assert!((fast - slow).abs() < 1e-8, "{fast} vs {slow}");
    }
}

#[test]
fn ssim_matches_naive_oracle_on_odd_sizes() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for (w, h) in [(11, 11), (32, 17), (23, 32)] {
        let a = random_image(&mut rng, w, h, 1);
        let b = Image::from_fn(w, h, 1, |_, x, y| {
            (a.get(0, x, y) * 0.7 + 0.3 * rng.random::<f64>()).min(1.0)
        })
        .unwrap();
        let fast = ssim(&a, &b).unwrap();
        let slow = naive_ssim(&a, &b);
        assert!((fast - slow).abs() < 1e-8, "{w}x{h}: {fast} vs {slow}");
    }
}

#[test]
fn ssim_uses_rec709_grayscale_for_color() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let a = random_image(&mut rng, 16, 16, 3);
    let b = random_image(&mut rng, 16, 16, 3);
    let ga = tagc::to_grayscale(&a);
    let gb = tagc::to_grayscale(&b);
    assert!((ssim(&a, &b).unwrap() - naive_ssim(&ga, &gb)).abs() < 1e-8);
}

#[test]
fn full_reference_metrics_are_symmetric_and_self_similar() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for (w, h) in [(16, 16), (40, 27)] {
        let a = random_image(&mut rng, w, h, 3);
        let b = random_image(&mut rng, w, h, 3);
        assert_eq!(psnr(&a, &b).unwrap(), psnr(&b, &a).unwrap());
        assert_eq!(ssim(&a, &b).unwrap(), ssim(&b, &a).unwrap());
        let (f1, f2) = (fsim(&a, &b).unwrap(), fsim(&b, &a).unwrap());
        assert!((f1 - f2).abs() < 1e-9);
        assert!((0.0..=1.0).contains(&f1));

        assert_eq!(psnr(&a, &a).unwrap(), f64::INFINITY);
        assert!((ssim(&a, &a).unwrap() - 1.0).abs() < 1e-9);
        assert!((fsim(&a, &a).unwrap() - 1.0).abs() < 1e-6);
    }
}

#[test]
fn custom_window_configs_apply() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let a = random_image(&mut rng, 20, 20, 1);
    let b = random_image(&mut rng, 20, 20, 1);
    let narrow = SsimConfig { window: 7, ..Default::default() };
    assert_ne!(ssim_with(&a, &b, &narrow).unwrap(), ssim(&a, &b).unwrap());
    let no_pool = FsimConfig { downsample: false, ..Default::default() };
    assert_eq!(fsim_with(&a, &b, &no_pool).unwrap(), fsim(&a, &b).unwrap());
}

#[derive(serde::Deserialize)]
struct FsimReference {
    reference: String,
    test: String,
    fsim: f64,
}

#[test]
fn fsim_agrees_with_reference_implementation() {
    let dir = testdata().join("fsim");
    let text = std::fs::read_to_string(dir.join("reference.json")).unwrap();
    let rows: Vec<FsimReference> = serde_json::from_str(&text).unwrap();
    assert!(rows.len() >= 3);
    for row in rows {
        let a: Image = load_image(dir.join(&row.reference)).unwrap();
        let b: Image = load_image(dir.join(&row.test)).unwrap();
        let got = fsim(&a, &b).unwrap();
        println!("{} vs {}: {got:.5} (reference {:.5})", row.reference, row.test, row.fsim);
        assert!((got - row.fsim).abs() < 0.02, "{}: {got} vs {}", row.test, row.fsim);
    }
}

#[test]
fn aggd_recovers_gaussian_shape() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let normal = Normal::new(0.0, 1.3).unwrap();
    let samples: Vec<f64> = (0..100_000).map(|_| normal.sample(&mut rng)).collect();
    let fit = fit_aggd(&samples).unwrap();
    assert!((fit.shape - 2.0).abs() < 0.2, "{fit:?}");
    let ratio = fit.left_scale / fit.right_scale;
    assert!((ratio - 1.0).abs() < 0.1, "{fit:?}");
}

#[test]
fn aggd_recovers_laplacian_shape() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let samples: Vec<f64> = (0..100_000)
        .map(|_| {
            let u: f64 = rng.random::<f64>() - 0.5;
            -0.8 * u.signum() * (1.0 - 2.0 * u.abs()).ln()
        })
        .collect();
    let fit = fit_aggd(&samples).unwrap();
    assert!((fit.shape - 1.0).abs() < 0.1, "{fit:?}");
}

#[test]
fn aggd_mirrored_samples_swap_sides() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let samples: Vec<f64> = (0..5_000)
        .map(|_| {
            let v: f64 = rng.random::<f64>() - 0.5;
            if v < 0.0 { 3.0 * v } else { v }
        })
        .collect();
    let mirrored: Vec<f64> = samples.iter().map(|v| -v).collect();
    let a = fit_aggd(&samples).unwrap();
    let b = fit_aggd(&mirrored).unwrap();
    assert_eq!(a.shape, b.shape);
    assert_eq!(a.left_scale, b.right_scale);
    assert_eq!(a.right_scale, b.left_scale);
    assert!(a.left_scale > a.right_scale);
}
