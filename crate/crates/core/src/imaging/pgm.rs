use super::{GrayImage, ImagingError};

/// Parses a binary (P5) or plain (P2) PGM with maxval 255.
pub fn load_pgm(bytes: &[u8]) -> Result<GrayImage, ImagingError> {
    let mut cur = Cursor { bytes, pos: 0 };
    let magic = cur.token().ok_or_else(|| ImagingError::MalformedHeader("missing magic number".into()))?;
    let binary = match magic {
        b"P5" => true,
        b"P2" => false,
        other => {
            return Err(ImagingError::MalformedHeader(format!(
                "expected P2 or P5, found {:?}",
                String::from_utf8_lossy(other)
            )))
        }
    };
    let width = cur.header_number("width")?;
    let height = cur.header_number("height")?;
    let maxval = cur.header_number("maxval")?;
    if maxval != 255 {
        return Err(ImagingError::UnsupportedMaxval(maxval.min(u32::MAX as usize) as u32));
    }
    if width == 0 || height == 0 {
        return Err(ImagingError::MalformedHeader(format!("empty raster {width}x{height}")));
    }
    let count = width
        .checked_mul(height)
        .ok_or_else(|| ImagingError::MalformedHeader("raster size overflows".into()))?;

    let pixels = if binary {
        // exactly one whitespace byte separates maxval from the raster
        match cur.bytes.get(cur.pos) {
            Some(b) if b.is_ascii_whitespace() => cur.pos += 1,
            _ => return Err(ImagingError::MalformedHeader("missing whitespace after maxval".into())),
        }
        let data = &cur.bytes[cur.pos..];
        if data.len() < count {
            return Err(ImagingError::Truncated {
                expected: count,
                got: data.len(),
            });
        }
        data[..count].to_vec()
    } else {
        let mut pixels = Vec::with_capacity(count);
        while pixels.len() < count {
            let Some(tok) = cur.token() else {
                return Err(ImagingError::Truncated {
                    expected: count,
                    got: pixels.len(),
                });
            };
            let v = parse_usize(tok)
                .filter(|v| *v <= 255)
                .ok_or_else(|| ImagingError::MalformedHeader(format!("bad sample {:?}", String::from_utf8_lossy(tok))))?;
            pixels.push(v as u8);
        }
        pixels
    };
    GrayImage::new(width, height, pixels)
}

/// Encodes as binary P5, maxval 255.
pub fn save_pgm(img: &GrayImage) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", img.width(), img.height()).into_bytes();
    out.extend_from_slice(img.pixels());
    out
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    /// Next whitespace-delimited token, skipping `#` comments.
    fn token(&mut self) -> Option<&'a [u8]> {
        loop {
            while self.bytes.get(self.pos).is_some_and(|b| b.is_ascii_whitespace()) {
                self.pos += 1;
            }
            if self.bytes.get(self.pos) == Some(&b'#') {
                while self.bytes.get(self.pos).is_some_and(|&b| b != b'\n') {
                    self.pos += 1;
                }
                continue;
            }
            break;
        }
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(|b| !b.is_ascii_whitespace() && *b != b'#') {
            self.pos += 1;
        }
        (self.pos > start).then(|| &self.bytes[start..self.pos])
    }

    fn header_number(&mut self, what: &str) -> Result<usize, ImagingError> {
        let tok = self
            .token()
            .ok_or_else(|| ImagingError::MalformedHeader(format!("missing {what}")))?;
        parse_usize(tok)
            .ok_or_else(|| ImagingError::MalformedHeader(format!("bad {what} {:?}", String::from_utf8_lossy(tok))))
    }
}

fn parse_usize(tok: &[u8]) -> Option<usize> {
    std::str::from_utf8(tok).ok()?.parse().ok()
}
