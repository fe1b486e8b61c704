//! Grayscale images, fuzzy XOR edge maps and the gradient baseline.
//!
//! Edges come from evaluating the XOR network on every horizontally adjacent
//! pixel pair (vertical edges) and every vertically adjacent pair (horizontal
//! edges). The two maps are added into one merged map and min-max normalized
//! back to 8 bits.

mod edges;
mod filters;
mod pgm;

use thiserror::Error;

use crate::fuzzy::NetworkError;

pub use edges::{detect_edges, normalize_to_bytes, row_edge_pass, EdgeMaps};
pub use filters::{add_gaussian_noise, canny_gradient_baseline, gaussian_kernel, gaussian_smooth, DEFAULT_SIGMA};
pub use pgm::{load_pgm, save_pgm};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ImagingError {
    #[error("malformed PGM header: {0}")]
    MalformedHeader(String),
    #[error("truncated PGM payload: expected {expected} samples, got {got}")]
    Truncated { expected: usize, got: usize },
    #[error("unsupported PGM maxval {0} (only 255 is supported)")]
    UnsupportedMaxval(u32),
    #[error("pixel buffer of {got} bytes does not match {width}x{height}")]
    BufferSize { width: usize, height: usize, got: usize },
    #[error("image {width}x{height} is too small: {what}")]
    TooSmall {
        width: usize,
        height: usize,
        what: &'static str,
    },
    #[error("sigma must be finite and > 0, got {0}")]
    InvalidSigma(f64),
    #[error("noise parameters must be finite with variance >= 0, got mean {mean}, variance {variance}")]
    InvalidNoise { mean: f64, variance: f64 },
    #[error("edge values must be finite and >= 0")]
    InvalidEdgeValue,
    #[error(transparent)]
    Network(#[from] NetworkError),
}

/// Row-major 8-bit grayscale raster.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self, ImagingError> {
        if pixels.len() != width * height {
            return Err(ImagingError::BufferSize {
                width,
                height,
                got: pixels.len(),
            });
        }
        Ok(GrayImage { width, height, pixels })
    }

    pub fn filled(width: usize, height: usize, value: u8) -> Self {
        GrayImage {
            width,
            height,
            pixels: vec![value; width * height],
        }
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> u8) -> Self {
        let mut pixels = Vec::with_capacity(width * height);
        for r in 0..height {
            for c in 0..width {
                pixels.push(f(r, c));
            }
        }
        GrayImage { width, height, pixels }
    }

    /// Two-level image: `left` in columns `< step`, `right` from `step` on.
    pub fn vertical_step(width: usize, height: usize, step: usize, left: u8, right: u8) -> Self {
        Self::from_fn(width, height, |_, c| if c < step { left } else { right })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn into_pixels(self) -> Vec<u8> {
        self.pixels
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.pixels[row * self.width + col]
    }

    pub fn row(&self, r: usize) -> &[u8] {
        &self.pixels[r * self.width..(r + 1) * self.width]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.height, self.width, |r, c| self.get(c, r))
    }

    /// Intensity-reversed copy (`255 - p`).
    pub fn inverted(&self) -> Self {
        GrayImage {
            width: self.width,
            height: self.height,
            pixels: self.pixels.iter().map(|p| 255 - p).collect(),
        }
    }

    pub fn mean(&self) -> f64 {
        self.pixels.iter().map(|&p| p as f64).sum::<f64>() / self.pixels.len().max(1) as f64
    }
}

/// Row-major non-negative edge strengths.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeMap {
    width: usize,
    height: usize,
    values: Vec<f64>,
}

impl EdgeMap {
    pub fn new(width: usize, height: usize, values: Vec<f64>) -> Result<Self, ImagingError> {
        if values.len() != width * height {
            return Err(ImagingError::BufferSize {
                width,
                height,
                got: values.len(),
            });
        }
        if values.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(ImagingError::InvalidEdgeValue);
        }
        Ok(EdgeMap { width, height, values })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.width + col]
    }

    pub fn transpose(&self) -> Self {
        let mut values = Vec::with_capacity(self.values.len());
        for r in 0..self.width {
            for c in 0..self.height {
                values.push(self.get(c, r));
            }
        }
        EdgeMap {
            width: self.height,
            height: self.width,
            values,
        }
    }

    /// `(min, max)` over all values, `None` for an empty map.
    pub fn range(&self) -> Option<(f64, f64)> {
        let first = *self.values.first()?;
        Some(self.values.iter().fold((first, first), |(lo, hi), &v| (lo.min(v), hi.max(v))))
    }

    pub fn column_sums(&self) -> Vec<f64> {
        let mut sums = vec![0.0; self.width];
        for row in self.values.chunks_exact(self.width.max(1)) {
            for (s, v) in sums.iter_mut().zip(row) {
                *s += v;
            }
        }
        sums
    }

    /// One line per row, comma separated, 6 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(self.values.len() * 9);
        for row in self.values.chunks_exact(self.width.max(1)) {
            for (i, v) in row.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&format_sig6(*v));
            }
            out.push('\n');
        }
        out
    }
}

/// `%g`-style formatting with 6 significant digits.
pub fn format_sig6(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return if v == 0.0 { "0".into() } else { v.to_string() };
    }
    let sci = format!("{v:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if (-4..6).contains(&exp) {
        let s = format!("{v:.*}", (5 - exp) as usize);
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        let m = if mantissa.contains('.') {
            mantissa.trim_end_matches('0').trim_end_matches('.')
        } else {
            mantissa
        };
        format!("{m}e{exp}")
    }
}
