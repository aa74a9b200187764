use crate::error::{Error, Result};
use crate::image::ImagePlanar;
use crate::scalar::Scalar;

/// Mean squared difference over all samples of all channels.
pub fn mse<T: Scalar>(reference: &ImagePlanar<T>, test: &ImagePlanar<T>) -> Result<f64> {
    if !reference.same_shape(test) {
        return Err(Error::Shape(format!(
            "{}x{}x{} vs {}x{}x{}",
            reference.width(),
            reference.height(),
            reference.channels(),
            test.width(),
            test.height(),
            test.channels()
        )));
    }
    let mut sum = 0.0;
    for (a, b) in reference.planes().iter().zip(test.planes()) {
        for (x, y) in a.iter().zip(b) {
            let d = x.as_f64() - y.as_f64();
            sum += d * d;
        }
    }
    Ok(sum / (reference.pixel_count() * reference.channels()) as f64)
}

/// Peak signal-to-noise ratio in dB with peak 1.0; `f64::INFINITY` for
/// identical images.
pub fn psnr<T: Scalar>(reference: &ImagePlanar<T>, test: &ImagePlanar<T>) -> Result<f64> {
    let err = mse(reference, test)?;
    Ok(if err == 0.0 {
        f64::INFINITY
    } else {
        -10.0 * err.log10()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_is_infinite() {
        let a = ImagePlanar::constant(4, 4, 3, 0.3).unwrap();
        assert_eq!(psnr(&a, &a).unwrap(), f64::INFINITY);
    }

    #[test]
    fn black_vs_white_is_zero_db() {
        let a = ImagePlanar::constant(4, 4, 3, 0.0).unwrap();
        let b = ImagePlanar::constant(4, 4, 3, 1.0).unwrap();
        assert_eq!(psnr(&a, &b).unwrap(), 0.0);
    }

    #[test]
    fn channel_mismatch_is_shape_error() {
        let a = ImagePlanar::constant(4, 4, 3, 0.0).unwrap();
        let b = ImagePlanar::constant(4, 4, 1, 0.0).unwrap();
        assert!(matches!(psnr(&a, &b), Err(Error::Shape(_))));
        let c = ImagePlanar::constant(4, 5, 3, 0.0).unwrap();
        assert!(matches!(psnr(&a, &c), Err(Error::Shape(_))));
    }
}
