use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use super::{EdgeMap, GrayImage, ImagingError};

pub const DEFAULT_SIGMA: f64 = 1.0;

/// Normalized 1-D Gaussian of radius `ceil(3σ)`.
pub fn gaussian_kernel(sigma: f64) -> Result<Vec<f64>, ImagingError> {
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(ImagingError::InvalidSigma(sigma));
    }
    let radius = (3.0 * sigma).ceil() as i64;
    let mut k: Vec<f64> = (-radius..=radius)
        .map(|i| (-((i * i) as f64) / (2.0 * sigma * sigma)).exp())
        .collect();
    let sum: f64 = k.iter().sum();
    k.iter_mut().for_each(|w| *w /= sum);
    Ok(k)
}

/// Symmetric reflection (`d c b a | a b c d | d c b a`) of an out-of-range index.
#[inline]
fn reflect(i: i64, n: usize) -> usize {
    let n = n as i64;
    let m = i.rem_euclid(2 * n);
    (if m >= n { 2 * n - 1 - m } else { m }) as usize
}

fn convolve_rows(src: &[f64], width: usize, height: usize, kernel: &[f64]) -> Vec<f64> {
    let r = (kernel.len() / 2) as i64;
    let mut out = vec![0.0; src.len()];
    for y in 0..height {
        let row = &src[y * width..(y + 1) * width];
        for x in 0..width {
            out[y * width + x] = kernel
                .iter()
                .enumerate()
                .map(|(j, w)| w * row[reflect(x as i64 + j as i64 - r, width)])
                .sum();
        }
    }
    out
}

fn convolve_cols(src: &[f64], width: usize, height: usize, kernel: &[f64]) -> Vec<f64> {
    let r = (kernel.len() / 2) as i64;
    let mut out = vec![0.0; src.len()];
    for y in 0..height {
        for (j, w) in kernel.iter().enumerate() {
            let sy = reflect(y as i64 + j as i64 - r, height);
            let (dst, s) = (&mut out[y * width..(y + 1) * width], &src[sy * width..(sy + 1) * width]);
            for (d, v) in dst.iter_mut().zip(s) {
                *d += w * v;
            }
        }
    }
    out
}

fn to_bytes(values: &[f64]) -> Vec<u8> {
    values.iter().map(|v| v.round().clamp(0.0, 255.0) as u8).collect()
}

/// Separable Gaussian blur with reflected borders, rounded back to 8 bits.
pub fn gaussian_smooth(img: &GrayImage, sigma: f64) -> Result<GrayImage, ImagingError> {
    let kernel = gaussian_kernel(sigma)?;
    let (w, h) = (img.width(), img.height());
    let src: Vec<f64> = img.pixels().iter().map(|&p| p as f64).collect();
    let smoothed = convolve_cols(&convolve_rows(&src, w, h, &kernel), w, h, &kernel);
    GrayImage::new(w, h, to_bytes(&smoothed))
}

/// Adds i.i.d. Gaussian noise on the `[0, 1]` intensity scale, then clamps and
/// rounds back to 8 bits. Deterministic for a given seed.
pub fn add_gaussian_noise(img: &GrayImage, mean: f64, variance: f64, seed: u64) -> Result<GrayImage, ImagingError> {
    if !(mean.is_finite() && variance.is_finite() && variance >= 0.0) {
        return Err(ImagingError::InvalidNoise { mean, variance });
    }
    let normal = Normal::new(mean, variance.sqrt()).map_err(|_| ImagingError::InvalidNoise { mean, variance })?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pixels = img
        .pixels()
        .iter()
        .map(|&p| {
            let x = (p as f64 / 255.0 + normal.sample(&mut rng)).clamp(0.0, 1.0);
            (x * 255.0).round() as u8
        })
        .collect();
    GrayImage::new(img.width(), img.height(), pixels)
}

/// Gaussian smoothing followed by 3×3 Sobel gradient magnitude.
pub fn canny_gradient_baseline(img: &GrayImage, sigma: f64) -> Result<EdgeMap, ImagingError> {
    let s = gaussian_smooth(img, sigma)?;
    let (w, h) = (s.width(), s.height());
    let px = |r: i64, c: i64| s.get(reflect(r, h), reflect(c, w)) as f64;
    let mut values = Vec::with_capacity(w * h);
    for r in 0..h as i64 {
        for c in 0..w as i64 {
            let gx = (px(r - 1, c + 1) + 2.0 * px(r, c + 1) + px(r + 1, c + 1))
                - (px(r - 1, c - 1) + 2.0 * px(r, c - 1) + px(r + 1, c - 1));
            let gy = (px(r + 1, c - 1) + 2.0 * px(r + 1, c) + px(r + 1, c + 1))
                - (px(r - 1, c - 1) + 2.0 * px(r - 1, c) + px(r - 1, c + 1));
            values.push(gx.hypot(gy));
        }
    }
    EdgeMap::new(w, h, values)
}

#[cfg(test)]
pub(super) fn reflect_for_tests(i: i64, n: usize) -> usize {
    reflect(i, n)
}
