//! Reference image-quality metrics: MSE, PSNR, SSIM.
//!
//! PSNR is capped at [`PSNR_CAP`] dB for identical images so that benchmark
//! tables and CSV exports stay finite. SSIM uses the universal defaults:
//! an 11x11 Gaussian window with sigma 1.5 and stabilizers
//! `C1 = (0.01 * peak)^2`, `C2 = (0.03 * peak)^2`; multichannel images are
//! scored as the mean of per-channel SSIM.

use crate::error::{Error, Result};
use crate::image::ImageBuffer;

/// PSNR reported when the images are identical (MSE = 0).
pub const PSNR_CAP: f64 = 99.0;

const SSIM_WINDOW: usize = 11;
const SSIM_SIGMA: f64 = 1.5;
const SSIM_K1: f64 = 0.01;
const SSIM_K2: f64 = 0.03;

/// PSNR, SSIM and MSE for one image pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricReport {
    pub psnr: f64,
    pub ssim: f64,
    pub mse: f64,
}

fn check_same_shape(a: &ImageBuffer, b: &ImageBuffer) -> Result<()> {
    if !a.same_shape(b) {
        return Err(Error::ShapeMismatch(format!(
            "metric inputs {:?} vs {:?}",
            a.shape(),
            b.shape()
        )));
    }
    Ok(())
}

/// Mean squared difference over all `C*H*W` samples.
pub fn mse(a: &ImageBuffer, b: &ImageBuffer) -> Result<f64> {
    check_same_shape(a, b)?;
    let n = a.data().len() as f64;
    let sum: f64 = a
        .data()
        .iter()
        .zip(b.data().iter())
        .map(|(x, y)| (x - y) * (x - y))
        .sum();
    Ok(sum / n)
}

/// `10 * log10(peak^2 / mse)`, capped at [`PSNR_CAP`] when `mse = 0`.
pub fn psnr(a: &ImageBuffer, b: &ImageBuffer, peak: f64) -> Result<f64> {
    if peak <= 0.0 {
        return Err(Error::InvalidArgument(format!("peak must be > 0, got {peak}")));
    }
    let err = mse(a, b)?;
    if err == 0.0 {
        return Ok(PSNR_CAP);
    }
    Ok((10.0 * (peak * peak / err).log10()).min(PSNR_CAP))
}

/// Mean local SSIM over all fully-contained 11x11 windows, averaged over
/// channels. Inputs are assumed to live in `[0, 1]` (peak 1).
pub fn ssim(a: &ImageBuffer, b: &ImageBuffer) -> Result<f64> {
    check_same_shape(a, b)?;
    let (channels, h, w) = a.shape();
    if h < SSIM_WINDOW || w < SSIM_WINDOW {
        return Err(Error::InvalidArgument(format!(
            "image {h}x{w} smaller than the {SSIM_WINDOW}x{SSIM_WINDOW} SSIM window"
        )));
    }
    let window = gaussian_window(SSIM_WINDOW, SSIM_SIGMA);
    let c1 = (SSIM_K1 * 1.0) * (SSIM_K1 * 1.0);
    let c2 = (SSIM_K2 * 1.0) * (SSIM_K2 * 1.0);

    let mut channel_sum = 0.0;
    for ch in 0..channels {
        let pa = a.plane(ch);
        let pb = b.plane(ch);
        let mut local_sum = 0.0;
        let mut count = 0usize;
        for top in 0..=(h - SSIM_WINDOW) {
            for left in 0..=(w - SSIM_WINDOW) {
                let mut mu_a = 0.0;
                let mut mu_b = 0.0;
                for dy in 0..SSIM_WINDOW {
                    let row = (top + dy) * w + left;
                    let wrow = dy * SSIM_WINDOW;
                    for dx in 0..SSIM_WINDOW {
                        let wt = window[wrow + dx];
                        mu_a += wt * pa[row + dx];
                        mu_b += wt * pb[row + dx];
                    }
                }
                let mut var_a = 0.0;
                let mut var_b = 0.0;
                let mut cov = 0.0;
                for dy in 0..SSIM_WINDOW {
                    let row = (top + dy) * w + left;
                    let wrow = dy * SSIM_WINDOW;
                    for dx in 0..SSIM_WINDOW {
                        let wt = window[wrow + dx];
                        let da = pa[row + dx] - mu_a;
                        let db = pb[row + dx] - mu_b;
                        var_a += wt * da * da;
                        var_b += wt * db * db;
                        cov += wt * da * db;
                    }
                }
                let num = (2.0 * mu_a * mu_b + c1) * (2.0 * cov + c2);
                let den = (mu_a * mu_a + mu_b * mu_b + c1) * (var_a + var_b + c2);
                local_sum += num / den;
                count += 1;
            }
        }
        channel_sum += local_sum / count as f64;
    }
    Ok(channel_sum / channels as f64)
}

/// Computes all three metrics at once (peak fixed to 1.0).
pub fn metric_report(a: &ImageBuffer, b: &ImageBuffer) -> Result<MetricReport> {
    Ok(MetricReport {
        psnr: psnr(a, b, 1.0)?,
        ssim: ssim(a, b)?,
        mse: mse(a, b)?,
    })
}

fn gaussian_window(size: usize, sigma: f64) -> Vec<f64> {
    let c = (size / 2) as f64;
    let mut w = Vec::with_capacity(size * size);
    for y in 0..size {
        for x in 0..size {
            let dy = y as f64 - c;
            let dx = x as f64 - c;
            w.push((-(dy * dy + dx * dx) / (2.0 * sigma * sigma)).exp());
        }
    }
    let sum: f64 = w.iter().sum();
    for v in &mut w {
        *v /= sum;
    }
    w
}
