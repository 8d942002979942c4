//! The pixel container and basic raster operations.
//!
//! An [`ImageBuffer`] is a `channels x height x width` grid of `f64` samples
//! stored row-major per channel, with a nominal intensity range of `[0, 1]`.
//! Values outside that range are legal mid-pipeline (Wiener output is
//! deliberately unclamped); [`ImageBuffer::clamp01`] is applied only at
//! export boundaries.

use std::path::Path;

use crate::error::{Error, Result};

/// A `C x H x W` raster of `f64` samples, row-major per channel.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageBuffer {
    channels: usize,
    height: usize,
    width: usize,
    data: Vec<f64>,
}

impl ImageBuffer {
    /// All-zero image of the given shape.
    pub fn zeros(channels: usize, height: usize, width: usize) -> Self {
        ImageBuffer {
            channels,
            height,
            width,
            data: vec![0.0; channels * height * width],
        }
    }

    /// Builds an image from raw samples, validating length and finiteness.
    pub fn from_vec(channels: usize, height: usize, width: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != channels * height * width {
            return Err(Error::ShapeMismatch(format!(
                "expected {} samples for {}x{}x{}, got {}",
                channels * height * width,
                channels,
                height,
                width,
                data.len()
            )));
        }
        if !data.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite("image samples".into()));
        }
        Ok(ImageBuffer {
            channels,
            height,
            width,
            data,
        })
    }

    /// Constant-valued image.
    pub fn constant(channels: usize, height: usize, width: usize, value: f64) -> Self {
        ImageBuffer {
            channels,
            height,
            width,
            data: vec![value; channels * height * width],
        }
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn shape(&self) -> (usize, usize, usize) {
        (self.channels, self.height, self.width)
    }

    pub fn same_shape(&self, other: &ImageBuffer) -> bool {
        self.shape() == other.shape()
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    /// One channel as a contiguous `H x W` slice.
    pub fn plane(&self, channel: usize) -> &[f64] {
        let n = self.height * self.width;
        &self.data[channel * n..(channel + 1) * n]
    }

    pub fn plane_mut(&mut self, channel: usize) -> &mut [f64] {
        let n = self.height * self.width;
        &mut self.data[channel * n..(channel + 1) * n]
    }

    #[inline]
    pub fn at(&self, channel: usize, y: usize, x: usize) -> f64 {
        self.data[(channel * self.height + y) * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, channel: usize, y: usize, x: usize, value: f64) {
        self.data[(channel * self.height + y) * self.width + x] = value;
    }

    /// Mean over all samples.
    pub fn mean(&self) -> f64 {
        if self.data.is_empty() {
            return 0.0;
        }
        self.data.iter().sum::<f64>() / self.data.len() as f64
    }

    /// Population variance over all samples.
    pub fn variance(&self) -> f64 {
        if self.data.is_empty() {
            return 0.0;
        }
        let mean = self.mean();
        self.data.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / self.data.len() as f64
    }

    /// Element-wise map into a new image.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> ImageBuffer {
        ImageBuffer {
            channels: self.channels,
            height: self.height,
            width: self.width,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Square crop of side `size` with top-left corner `(top, left)`.
    pub fn extract_patch(&self, top: usize, left: usize, size: usize) -> Result<ImageBuffer> {
        if top + size > self.height || left + size > self.width || size == 0 {
            return Err(Error::PatchOutOfBounds {
                top,
                left,
                size,
                height: self.height,
                width: self.width,
            });
        }
        let mut out = ImageBuffer::zeros(self.channels, size, size);
        for c in 0..self.channels {
            for y in 0..size {
                let src = (c * self.height + top + y) * self.width + left;
                let dst = (c * size + y) * size;
                out.data[dst..dst + size].copy_from_slice(&self.data[src..src + size]);
            }
        }
        Ok(out)
    }

    /// Single-channel luminance image. Grayscale input is returned unchanged.
    pub fn to_luma(&self) -> ImageBuffer {
        if self.channels == 1 {
            return self.clone();
        }
        let n = self.height * self.width;
        let (r, g, b) = (self.plane(0), self.plane(1), self.plane(2));
        let mut data = Vec::with_capacity(n);
        for i in 0..n {
            data.push(0.299 * r[i] + 0.587 * g[i] + 0.114 * b[i]);
        }
        ImageBuffer {
            channels: 1,
            height: self.height,
            width: self.width,
            data,
        }
    }

    /// Clamps every sample into `[0, 1]`.
    pub fn clamp01(&self) -> ImageBuffer {
        self.map(|v| v.clamp(0.0, 1.0))
    }

    /// Largest absolute per-sample difference; images must share a shape.
    pub fn max_abs_diff(&self, other: &ImageBuffer) -> f64 {
        debug_assert!(self.same_shape(other));
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Reads an 8-bit PNG; gray stays single-channel, anything else becomes RGB.
    /// Intensities map to `[0, 1]` as `value / 255` exactly.
    pub fn read_png(path: impl AsRef<Path>) -> Result<ImageBuffer> {
        let path = path.as_ref();
        let img = image::open(path).map_err(|source| Error::Image {
            path: path.to_path_buf(),
            source,
        })?;
        let (w, h) = (img.width() as usize, img.height() as usize);
        match img.color() {
            image::ColorType::L8 | image::ColorType::L16 | image::ColorType::La8 | image::ColorType::La16 => {
                let gray = img.into_luma8();
                let data = gray.as_raw().iter().map(|&v| v as f64 / 255.0).collect();
                ImageBuffer::from_vec(1, h, w, data)
            }
            _ => {
                let rgb = img.into_rgb8();
                let raw = rgb.as_raw();
                let n = h * w;
                let mut data = vec![0.0; 3 * n];
                for i in 0..n {
                    data[i] = raw[3 * i] as f64 / 255.0;
                    data[n + i] = raw[3 * i + 1] as f64 / 255.0;
                    data[2 * n + i] = raw[3 * i + 2] as f64 / 255.0;
                }
                ImageBuffer::from_vec(3, h, w, data)
            }
        }
    }

    /// Writes an 8-bit PNG, clamping to `[0, 1]` and rounding to `value * 255`.
    pub fn write_png(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let to_u8 = |v: f64| (v.clamp(0.0, 1.0) * 255.0).round() as u8;
        let (h, w) = (self.height as u32, self.width as u32);
        let result = match self.channels {
            1 => {
                let bytes: Vec<u8> = self.data.iter().map(|&v| to_u8(v)).collect();
                image::GrayImage::from_raw(w, h, bytes)
                    .expect("buffer sized from image dims")
                    .save(path)
            }
            3 => {
                let n = self.height * self.width;
                let mut bytes = Vec::with_capacity(3 * n);
                for i in 0..n {
                    bytes.push(to_u8(self.data[i]));
                    bytes.push(to_u8(self.data[n + i]));
                    bytes.push(to_u8(self.data[2 * n + i]));
                }
                image::RgbImage::from_raw(w, h, bytes)
                    .expect("buffer sized from image dims")
                    .save(path)
            }
            c => {
                return Err(Error::InvalidArgument(format!(
                    "PNG export supports 1 or 3 channels, got {c}"
                )))
            }
        };
        result.map_err(|source| Error::Image {
            path: path.to_path_buf(),
            source,
        })
    }
}

/// Per-channel median filter over a `window x window` neighborhood with
/// replicate padding at the borders. `window` must be odd and at least 3.
pub fn median_filter(img: &ImageBuffer, window: usize) -> Result<ImageBuffer> {
    if window < 3 || window % 2 == 0 {
        return Err(Error::InvalidArgument(format!(
            "median window must be odd and >= 3, got {window}"
        )));
    }
    let (c, h, w) = img.shape();
    let radius = (window / 2) as isize;
    let mut out = ImageBuffer::zeros(c, h, w);
    let mut neighborhood = Vec::with_capacity(window * window);
    for ch in 0..c {
        let plane = img.plane(ch);
        for y in 0..h {
            for x in 0..w {
                neighborhood.clear();
                for dy in -radius..=radius {
                    let sy = (y as isize + dy).clamp(0, h as isize - 1) as usize;
                    for dx in -radius..=radius {
                        let sx = (x as isize + dx).clamp(0, w as isize - 1) as usize;
                        neighborhood.push(plane[sy * w + sx]);
                    }
                }
                neighborhood.sort_by(|a, b| a.partial_cmp(b).unwrap());
                out.set(ch, y, x, neighborhood[neighborhood.len() / 2]);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ramp(h: usize, w: usize) -> ImageBuffer {
        let data = (0..h * w).map(|i| i as f64 / (h * w) as f64).collect();
        ImageBuffer::from_vec(1, h, w, data).unwrap()
    }

    #[test]
    fn from_vec_rejects_bad_length() {
        assert!(matches!(
            ImageBuffer::from_vec(1, 2, 2, vec![0.0; 3]),
            Err(Error::ShapeMismatch(_))
        ));
    }

    #[test]
    fn from_vec_rejects_non_finite() {
        assert!(matches!(
            ImageBuffer::from_vec(1, 1, 2, vec![0.0, f64::NAN]),
            Err(Error::NonFinite(_))
        ));
    }

    #[test]
    fn extract_patch_identity() {
        let img = ramp(8, 8);
        let patch = img.extract_patch(0, 0, 8).unwrap();
        assert_eq!(patch, img);
    }

    #[test]
    fn extract_patch_rejects_out_of_bounds() {
        let img = ramp(8, 8);
        assert!(img.extract_patch(4, 4, 8).is_err());
    }

    #[test]
    fn to_luma_of_gray_is_identity() {
        let img = ramp(4, 4);
        assert_eq!(img.to_luma(), img);
    }

    #[test]
    fn to_luma_weights_sum_to_one() {
        let img = ImageBuffer::constant(3, 4, 4, 0.5);
        let luma = img.to_luma();
        assert!(luma.data().iter().all(|&v| (v - 0.5).abs() < 1e-12));
    }

    #[test]
    fn clamp01_caps_values() {
        let img = ImageBuffer::from_vec(1, 1, 3, vec![-0.2, 0.4, 1.7]).unwrap();
        assert_eq!(img.clamp01().data(), &[0.0, 0.4, 1.0]);
    }

    #[test]
    fn median_constant_is_identity() {
        let img = ImageBuffer::constant(1, 5, 5, 0.3);
        let filtered = median_filter(&img, 3).unwrap();
        assert_eq!(filtered, img);
    }

    #[test]
    fn median_kills_isolated_impulse() {
        let mut img = ImageBuffer::zeros(1, 5, 5);
        img.set(0, 2, 2, 1.0);
        let filtered = median_filter(&img, 3).unwrap();
        assert!(filtered.data().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn median_rejects_even_window() {
        let img = ImageBuffer::zeros(1, 5, 5);
        assert!(median_filter(&img, 4).is_err());
    }

    #[test]
    fn median_commutes_with_offset() {
        let img = ramp(6, 6);
        let shifted = img.map(|v| v + 0.25);
        let a = median_filter(&shifted, 3).unwrap();
        let b = median_filter(&img, 3).unwrap().map(|v| v + 0.25);
        assert!(a.max_abs_diff(&b) < 1e-12);
    }

    #[test]
    fn png_round_trip_is_exact_on_8bit_grid() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("rt.png");
        // Values on the k/255 grid survive the 8-bit round trip bit-exactly.
        let data: Vec<f64> = (0..64).map(|i| (i * 4 % 256) as f64 / 255.0).collect();
        let img = ImageBuffer::from_vec(1, 8, 8, data).unwrap();
        img.write_png(&path).unwrap();
        let back = ImageBuffer::read_png(&path).unwrap();
        assert_eq!(back, img);
    }

    #[test]
    fn png_rgb_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("rgb.png");
        let data: Vec<f64> = (0..3 * 16).map(|i| (i % 256) as f64 / 255.0).collect();
        let img = ImageBuffer::from_vec(3, 4, 4, data).unwrap();
        img.write_png(&path).unwrap();
        let back = ImageBuffer::read_png(&path).unwrap();
        assert_eq!(back, img);
    }
}
