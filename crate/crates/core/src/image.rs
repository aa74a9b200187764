//! Planar floating-point images and the 8-bit codec boundary.
//!
//! Samples are normalized intensities in `[0, 1]`. Pixel codes are divided by
//! 255 with no transfer-function decoding, and quantized back with
//! round-half-away-from-zero only when an image is written.

use std::path::Path;

use image::{DynamicImage, ImageFormat, ImageReader};

use crate::error::{Error, Result};
use crate::plane::Plane;
use crate::scalar::Scalar;

/// Rec.709 luma weights shared by the luminance factor and grayscale conversion.
pub const LUMA_WEIGHTS: [f64; 3] = [0.2126, 0.7152, 0.0722];

/// A 1- or 3-channel image stored as one row-major plane per channel.
#[derive(Debug, Clone, PartialEq)]
pub struct ImagePlanar<T = f64> {
    width: usize,
    height: usize,
    planes: Vec<Vec<T>>,
}

impl<T: Scalar> ImagePlanar<T> {
    /// Builds an image from per-channel planes, checking every invariant.
    pub fn from_planes(width: usize, height: usize, planes: Vec<Vec<T>>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidImage(format!(
                "dimensions must be positive, got {width}x{height}"
            )));
        }
        if planes.len() != 1 && planes.len() != 3 {
            return Err(Error::InvalidImage(format!(
                "expected 1 or 3 channels, got {}",
                planes.len()
            )));
        }
        for (c, plane) in planes.iter().enumerate() {
            if plane.len() != width * height {
                return Err(Error::InvalidImage(format!(
                    "channel {c} holds {} samples, expected {}",
                    plane.len(),
                    width * height
                )));
            }
            if let Some(bad) = plane.iter().position(|v| !(*v >= T::zero() && *v <= T::one())) {
                return Err(Error::InvalidImage(format!(
                    "channel {c} sample {bad} = {} lies outside [0, 1]",
                    plane[bad]
                )));
            }
        }
        Ok(Self {
            width,
            height,
            planes,
        })
    }

    /// Image with every sample set to `value`.
    pub fn constant(width: usize, height: usize, channels: usize, value: T) -> Result<Self> {
        Self::from_planes(width, height, vec![vec![value; width * height]; channels])
    }

    /// Builds an image by evaluating `f(channel, x, y)` for every sample.
    pub fn from_fn(
        width: usize,
        height: usize,
        channels: usize,
        mut f: impl FnMut(usize, usize, usize) -> T,
    ) -> Result<Self> {
        let planes = (0..channels)
            .map(|c| {
                (0..width * height)
                    .map(|i| f(c, i % width, i / width))
                    .collect()
            })
            .collect();
        Self::from_planes(width, height, planes)
    }

    /// Trusted constructor for kernels whose output is clamped by construction.
    pub(crate) fn from_planes_unchecked(width: usize, height: usize, planes: Vec<Vec<T>>) -> Self {
        debug_assert!(planes.iter().all(|p| p.len() == width * height));
        Self {
            width,
            height,
            planes,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn channels(&self) -> usize {
        self.planes.len()
    }

    /// Number of pixels (not samples).
    pub fn pixel_count(&self) -> usize {
        self.width * self.height
    }

    pub fn plane(&self, channel: usize) -> &[T] {
        &self.planes[channel]
    }

    pub fn planes(&self) -> &[Vec<T>] {
        &self.planes
    }

    /// Sample at column `x`, row `y`.
    pub fn get(&self, channel: usize, x: usize, y: usize) -> T {
        self.planes[channel][y * self.width + x]
    }

    /// Same dimensions and channel count.
    pub fn same_shape<U: Scalar>(&self, other: &ImagePlanar<U>) -> bool {
        self.width == other.width
            && self.height == other.height
            && self.channels() == other.channels()
    }

    /// Converts the sample type.
    pub fn cast<U: Scalar>(&self) -> ImagePlanar<U> {
        let planes = self
            .planes
            .iter()
            .map(|p| {
                p.iter()
                    .map(|v| U::lit(v.as_f64()).max(U::zero()).min(U::one()))
                    .collect()
            })
            .collect();
        ImagePlanar::from_planes_unchecked(self.width, self.height, planes)
    }

    /// Applies `f` to every sample and clamps the result into `[0, 1]`.
    pub fn map_clamped(&self, f: impl Fn(T) -> T + Sync) -> Self {
        let planes = self
            .planes
            .iter()
            .map(|p| p.iter().map(|&v| clamp_unit(f(v))).collect())
            .collect();
        Self::from_planes_unchecked(self.width, self.height, planes)
    }

    /// Copies channel `channel` into an `f64` plane, multiplied by `scale`.
    pub fn to_plane(&self, channel: usize, scale: f64) -> Plane {
        Plane::from_vec(
            self.width,
            self.height,
            self.planes[channel].iter().map(|v| v.as_f64() * scale).collect(),
        )
    }

    /// Quantizes every sample to an 8-bit code.
    pub fn to_codes(&self) -> Vec<Vec<u8>> {
        self.planes
            .iter()
            .map(|p| p.iter().map(|&v| quantize(v)).collect())
            .collect()
    }
}

/// NaN maps to 0 so that the result always satisfies the image invariant.
pub(crate) fn clamp_unit<T: Scalar>(v: T) -> T {
    if v >= T::one() {
        T::one()
    } else if v > T::zero() {
        v
    } else {
        T::zero()
    }
}

/// `round(clamp(v, 0, 1) * 255)` with ties away from zero.
pub fn quantize<T: Scalar>(v: T) -> u8 {
    (clamp_unit(v).as_f64() * 255.0).round() as u8
}

/// Per-channel arithmetic means.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct ChannelStats<T = f64> {
    pub mean_r: T,
    pub mean_g: T,
    pub mean_b: T,
}

impl<T: Scalar> ChannelStats<T> {
    pub fn new(mean_r: T, mean_g: T, mean_b: T) -> Self {
        Self {
            mean_r,
            mean_g,
            mean_b,
        }
    }

    /// Same mean in all three fields.
    pub fn uniform(mean: T) -> Self {
        Self::new(mean, mean, mean)
    }
}

/// Arithmetic mean of each plane, accumulated in `f64`.
///
/// A single-channel image replicates its one mean into all three fields.
pub fn channel_means<T: Scalar>(img: &ImagePlanar<T>) -> ChannelStats<T> {
    let n = img.pixel_count() as f64;
    let means: Vec<T> = img
        .planes()
        .iter()
        .map(|p| T::lit(p.iter().fold(0.0, |acc, v| acc + v.as_f64()) / n))
        .collect();
    match means.as_slice() {
        [m] => ChannelStats::uniform(*m),
        [r, g, b] => ChannelStats::new(*r, *g, *b),
        _ => unreachable!("images hold 1 or 3 channels"),
    }
}

/// Rec.709-weighted grayscale. Single-channel input is returned unchanged.
pub fn to_grayscale<T: Scalar>(img: &ImagePlanar<T>) -> ImagePlanar<T> {
    if img.channels() == 1 {
        return img.clone();
    }
    let [wr, wg, wb] = LUMA_WEIGHTS.map(T::lit);
    let (r, g, b) = (img.plane(0), img.plane(1), img.plane(2));
    let gray = r
        .iter()
        .zip(g)
        .zip(b)
        .map(|((&r, &g), &b)| clamp_unit(wr * r + wg * g + wb * b))
        .collect();
    ImagePlanar::from_planes_unchecked(img.width(), img.height(), vec![gray])
}

/// Grayscale intensities as an `f64` plane on the `[0, scale]` range.
pub(crate) fn gray_plane<T: Scalar>(img: &ImagePlanar<T>, scale: f64) -> Plane {
    if img.channels() == 1 {
        return img.to_plane(0, scale);
    }
    let [wr, wg, wb] = LUMA_WEIGHTS;
    let data = img
        .plane(0)
        .iter()
        .zip(img.plane(1))
        .zip(img.plane(2))
        .map(|((r, g), b)| (wr * r.as_f64() + wg * g.as_f64() + wb * b.as_f64()) * scale)
        .collect();
    Plane::from_vec(img.width(), img.height(), data)
}

/// Decodes an 8-bit PNG or JPEG file.
///
/// Color sources yield three channels, grayscale sources one; alpha is dropped.
pub fn load_image<T: Scalar>(path: impl AsRef<Path>) -> Result<ImagePlanar<T>> {
    let path = path.as_ref();
    let io_err = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let format_err = |property: String| Error::Format {
        path: path.to_path_buf(),
        property,
    };

    let reader = ImageReader::open(path)
        .map_err(io_err)?
        .with_guessed_format()
        .map_err(io_err)?;
    match reader.format() {
        Some(ImageFormat::Png | ImageFormat::Jpeg) => {}
        Some(other) => return Err(format_err(format!("format {other:?}"))),
        None => return Err(format_err("format (unrecognized signature)".into())),
    }
    let decoded = reader.decode().map_err(|e| match e {
        image::ImageError::IoError(source) => io_err(source),
        other => format_err(format!("encoding ({other})")),
    })?;

    let (width, height) = (decoded.width() as usize, decoded.height() as usize);
    let (channels, bytes) = match decoded {
        DynamicImage::ImageLuma8(buf) => (1, buf.into_raw()),
        DynamicImage::ImageLumaA8(buf) => (1, strip_alpha(&buf.into_raw(), 1)),
        DynamicImage::ImageRgb8(buf) => (3, buf.into_raw()),
        DynamicImage::ImageRgba8(buf) => (3, strip_alpha(&buf.into_raw(), 3)),
        other => {
            let bits = other.color().bits_per_pixel() / u16::from(other.color().channel_count());
            return Err(format_err(format!("bit depth {bits} ({:?})", other.color())));
        }
    };

    let scale = T::lit(255.0);
    let planes = (0..channels)
        .map(|c| {
            bytes
                .iter()
                .skip(c)
                .step_by(channels)
                .map(|&code| T::lit(f64::from(code)) / scale)
                .collect()
        })
        .collect();
    ImagePlanar::from_planes(width, height, planes)
}

fn strip_alpha(raw: &[u8], color_channels: usize) -> Vec<u8> {
    raw.chunks_exact(color_channels + 1)
        .flat_map(|px| px[..color_channels].iter().copied())
        .collect()
}

/// Writes an 8-bit PNG (grayscale or RGB).
pub fn save_image<T: Scalar>(img: &ImagePlanar<T>, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let codes = img.to_codes();
    let interleaved: Vec<u8> = (0..img.pixel_count())
        .flat_map(|i| codes.iter().map(move |p| p[i]))
        .collect();
    let color = if img.channels() == 1 {
        image::ExtendedColorType::L8
    } else {
        image::ExtendedColorType::Rgb8
    };
    image::save_buffer_with_format(
        path,
        &interleaved,
        img.width() as u32,
        img.height() as u32,
        color,
        ImageFormat::Png,
    )
    .map_err(|e| match e {
        image::ImageError::IoError(source) => Error::Io {
            path: path.to_path_buf(),
            source,
        },
        other => Error::Io {
            path: path.to_path_buf(),
            source: std::io::Error::other(other.to_string()),
        },
    })
}
