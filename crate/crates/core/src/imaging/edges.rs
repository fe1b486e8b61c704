use crate::fuzzy::{fuzzy_xor_batch, FuzzyNetwork, NetworkError};

use super::{EdgeMap, GrayImage, ImagingError};

/// Vertical, horizontal and merged edge maps of one image.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeMaps {
    /// `H × (W−1)`: XOR of each pixel with its right neighbour.
    pub vertical: EdgeMap,
    /// `(H−1) × W`: XOR of each pixel with the pixel below.
    pub horizontal: EdgeMap,
    /// `H × W` sum of both, with the last column and last row replicated.
    pub merged: EdgeMap,
}

fn xor_universes(net: &FuzzyNetwork) -> Result<[crate::fuzzy::Universe; 2], NetworkError> {
    match net.variables() {
        [a, b] => Ok([a.universe, b.universe]),
        vars => Err(NetworkError::DimensionMismatch {
            what: "XOR input variables",
            expected: 2,
            got: vars.len(),
        }),
    }
}

/// Fuzzy XOR of every consecutive pair in `row`, evaluated as one batch.
pub fn row_edge_pass(row: &[u8], net: &FuzzyNetwork) -> Result<Vec<f64>, ImagingError> {
    if row.len() < 2 {
        return Err(ImagingError::TooSmall {
            width: row.len(),
            height: 1,
            what: "a row needs at least 2 pixels",
        });
    }
    let [ua, ub] = xor_universes(net)?;
    let a: Vec<f64> = row[..row.len() - 1].iter().map(|&p| ua.from_intensity(p)).collect();
    let b: Vec<f64> = row[1..].iter().map(|&p| ub.from_intensity(p)).collect();
    Ok(fuzzy_xor_batch(net, &a, &b)?)
}

fn pass_all_rows(img: &GrayImage, net: &FuzzyNetwork) -> Result<EdgeMap, ImagingError> {
    let mut values = Vec::with_capacity(img.height() * (img.width() - 1));
    for r in 0..img.height() {
        values.extend(row_edge_pass(img.row(r), net)?);
    }
    EdgeMap::new(img.width() - 1, img.height(), values).map_err(|_| {
        NetworkError::Structure("network produced a negative or non-finite edge value".into()).into()
    })
}

/// Runs the XOR network over all horizontal and vertical neighbour pairs.
pub fn detect_edges(img: &GrayImage, net: &FuzzyNetwork) -> Result<EdgeMaps, ImagingError> {
    let (w, h) = (img.width(), img.height());
    if w < 2 || h < 2 {
        return Err(ImagingError::TooSmall {
            width: w,
            height: h,
            what: "edge detection needs at least 2x2 pixels",
        });
    }
    let vertical = pass_all_rows(img, net)?;
    let horizontal = pass_all_rows(&img.transpose(), net)?.transpose();

    let mut merged = Vec::with_capacity(w * h);
    for r in 0..h {
        for c in 0..w {
            merged.push(vertical.get(r, c.min(w - 2)) + horizontal.get(r.min(h - 2), c));
        }
    }
    Ok(EdgeMaps {
        vertical,
        horizontal,
        merged: EdgeMap::new(w, h, merged)?,
    })
}

/// Global min-max map onto `[0, 255]`; a constant map becomes all zeros.
pub fn normalize_to_bytes(map: &EdgeMap) -> GrayImage {
    let (lo, hi) = map.range().unwrap_or((0.0, 0.0));
    let span = hi - lo;
    let pixels = map
        .values()
        .iter()
        .map(|&v| {
            if span > 0.0 {
                ((v - lo) / span * 255.0).round().clamp(0.0, 255.0) as u8
            } else {
                0
            }
        })
        .collect();
    GrayImage::new(map.width(), map.height(), pixels).expect("same dimensions")
}
