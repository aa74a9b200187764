//! Grayscale intensity histograms.

use std::fmt::Write as _;

use tagc::{to_grayscale, Error, ImagePlanar, Scalar};

/// Counts of Rec.709 grayscale intensities in `bins` equal-width bins over
/// `[0, 1]`. The value 1.0 falls in the last bin.
pub fn intensity_histogram<T: Scalar>(img: &ImagePlanar<T>, bins: usize) -> tagc::Result<Vec<u64>> {
    if bins < 2 {
        return Err(Error::Config(format!("need at least 2 bins, got {bins}")));
    }
    let gray = to_grayscale(img);
    let mut counts = vec![0u64; bins];
    for v in gray.plane(0) {
        let idx = ((v.as_f64() * bins as f64) as usize).min(bins - 1);
        counts[idx] += 1;
    }
    Ok(counts)
}

/// Histogram as CSV with columns `bin,lower,upper,count`.
pub fn export_histogram<T: Scalar>(img: &ImagePlanar<T>, bins: usize) -> tagc::Result<String> {
    let counts = intensity_histogram(img, bins)?;
    let mut out = String::from("bin,lower,upper,count\n");
    for (i, count) in counts.iter().enumerate() {
        let lower = i as f64 / bins as f64;
        let upper = (i + 1) as f64 / bins as f64;
        let _ = writeln!(out, "{i},{lower:.6},{upper:.6},{count}");
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use tagc::Image;

    #[test]
    fn black_image_fills_bin_zero() {
        let counts = intensity_histogram(&Image::constant(7, 3, 3, 0.0).unwrap(), 256).unwrap();
        assert_eq!(counts[0], 21);
        assert!(counts[1..].iter().all(|&c| c == 0));
    }

    #[test]
    fn white_lands_in_last_bin() {
        let counts = intensity_histogram(&Image::constant(2, 2, 1, 1.0).unwrap(), 4).unwrap();
        assert_eq!(counts, vec![0, 0, 0, 4]);
    }

    #[test]
    fn too_few_bins() {
        assert!(intensity_histogram(&Image::constant(2, 2, 1, 1.0).unwrap(), 1).is_err());
    }

    #[test]
    fn csv_shape() {
        let text = export_histogram(&Image::constant(2, 1, 1, 0.3).unwrap(), 2).unwrap();
        assert_eq!(text, "bin,lower,upper,count\n0,0.000000,0.500000,2\n1,0.500000,1.000000,0\n");
    }
}
