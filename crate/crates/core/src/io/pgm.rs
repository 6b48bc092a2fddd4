//! Binary portable grey map (`P5`) reading and writing.

use crate::centroidal::DensityGrid;
use crate::error::{Error, Result};
use crate::voronoi::BoundingBox;

/// A decoded grey map. Samples are row-major, row 0 at the top.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GreyMap {
    pub width: usize,
    pub height: usize,
    pub max_value: u16,
    pub samples: Vec<u16>,
}

struct Header<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Header<'_> {
    fn skip_space_and_comments(&mut self) {
        while self.pos < self.bytes.len() {
            match self.bytes[self.pos] {
                b'#' => {
                    while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                c if c.is_ascii_whitespace() => self.pos += 1,
                _ => break,
            }
        }
    }

    fn number(&mut self, what: &str) -> Result<usize> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Pgm(format!("missing or invalid {what}")))
    }
}

impl GreyMap {
    pub fn parse(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < 2 || &bytes[..2] != b"P5" {
            return Err(Error::Pgm("magic number is not P5".into()));
        }
        let mut h = Header { bytes, pos: 2 };
        let width = h.number("width")?;
        let height = h.number("height")?;
        let max_value = h.number("max value")?;
        if width == 0 || height == 0 {
            return Err(Error::Pgm("zero dimension".into()));
        }
        if max_value == 0 || max_value > 65535 {
            return Err(Error::Pgm(format!("max value {max_value} out of range")));
        }
        // Exactly one whitespace byte separates the header from the raster.
        if h.pos >= bytes.len() || !bytes[h.pos].is_ascii_whitespace() {
            return Err(Error::Pgm("missing separator before raster".into()));
        }
        let raster = &bytes[h.pos + 1..];
        let wide = max_value > 255;
        let count = width * height;
        let need = if wide { 2 * count } else { count };
        if raster.len() < need {
            return Err(Error::Pgm(format!(
                "raster has {} bytes, expected {need}",
                raster.len()
            )));
        }
        let samples: Vec<u16> = if wide {
            raster[..need]
                .chunks_exact(2)
                .map(|c| u16::from_be_bytes([c[0], c[1]]))
                .collect()
        } else {
            raster[..need].iter().map(|&b| b as u16).collect()
        };
        if let Some(s) = samples.iter().find(|&&s| s as usize > max_value) {
            return Err(Error::Pgm(format!("sample {s} exceeds max value {max_value}")));
        }
        Ok(GreyMap {
            width,
            height,
            max_value: max_value as u16,
            samples,
        })
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = format!("P5\n{} {}\n{}\n", self.width, self.height, self.max_value).into_bytes();
        if self.max_value > 255 {
            for s in &self.samples {
                out.extend_from_slice(&s.to_be_bytes());
            }
        } else {
            out.extend(self.samples.iter().map(|&s| s as u8));
        }
        out
    }

    /// Samples scaled to `[0, 1]` and stretched over `bbox`.
    pub fn to_density(&self, bbox: BoundingBox) -> Result<DensityGrid> {
        let scale = 1.0 / self.max_value as f64;
        DensityGrid::new(
            self.width,
            self.height,
            self.samples.iter().map(|&s| s as f64 * scale).collect(),
            bbox,
        )
    }

    pub fn labels(&self) -> Vec<u32> {
        self.samples.iter().map(|&s| s as u32).collect()
    }
}
