//! Gray-level images, histograms and the PGM (P5) codec.
//!
//! PGM with maxval 255 is the canonical input: the pixel bytes are taken
//! verbatim, so histograms never depend on decoder behavior. PNG input is
//! available behind the `png` feature and is reduced to gray with
//! [`to_grayscale`].

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};

/// Number of gray levels in an 8-bit image.
pub const LEVELS: usize = 256;

/// Rectangular grid of 8-bit gray levels, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        check_dims(width, height, pixels.len())?;
        Ok(Self {
            width,
            height,
            pixels,
        })
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

    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.pixels[y * self.width + x]
    }
}

/// Value of a pixel in a bi-level image.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Binary {
    Black,
    White,
}

impl Binary {
    pub fn inverted(self) -> Self {
        match self {
            Binary::Black => Binary::White,
            Binary::White => Binary::Black,
        }
    }

    /// PGM byte for this value: black is 0, white is 255.
    pub fn to_byte(self) -> u8 {
        match self {
            Binary::Black => 0,
            Binary::White => 255,
        }
    }
}

/// Black-and-white image produced by thresholding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiLevelImage {
    width: usize,
    height: usize,
    pixels: Vec<Binary>,
}

impl BiLevelImage {
    pub fn new(width: usize, height: usize, pixels: Vec<Binary>) -> Result<Self> {
        check_dims(width, height, pixels.len())?;
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[Binary] {
        &self.pixels
    }

    pub fn get(&self, x: usize, y: usize) -> Binary {
        self.pixels[y * self.width + x]
    }

    /// Swaps black and white everywhere.
    pub fn inverted(&self) -> Self {
        Self {
            width: self.width,
            height: self.height,
            pixels: self.pixels.iter().map(|p| p.inverted()).collect(),
        }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        self.pixels.iter().map(|p| p.to_byte()).collect()
    }
}

fn check_dims(width: usize, height: usize, len: usize) -> Result<()> {
    if width == 0 || height == 0 {
        return Err(Error::InvalidImage(format!(
            "dimensions {width}x{height} contain no pixels"
        )));
    }
    match width.checked_mul(height) {
        Some(n) if n == len => Ok(()),
        _ => Err(Error::InvalidImage(format!(
            "{len} pixels do not fill a {width}x{height} grid"
        ))),
    }
}

/// Gray-level histogram: counts `N_i`, total `N` and frequencies `f_i = N_i / N`.
#[derive(Clone, Debug, PartialEq)]
pub struct Histogram {
    counts: [u64; LEVELS],
    total: u64,
    frequencies: [f64; LEVELS],
}

impl Histogram {
    /// Builds a histogram from raw counts. At least one count must be positive.
    pub fn from_counts(counts: [u64; LEVELS]) -> Result<Self> {
        let total: u64 = counts.iter().sum();
        if total == 0 {
            return Err(Error::Domain("histogram has no samples".into()));
        }
        let n = total as f64;
        let mut frequencies = [0.0; LEVELS];
        for (f, &c) in frequencies.iter_mut().zip(&counts) {
            *f = c as f64 / n;
        }
        Ok(Self {
            counts,
            total,
            frequencies,
        })
    }

    pub fn counts(&self) -> &[u64; LEVELS] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn frequencies(&self) -> &[f64; LEVELS] {
        &self.frequencies
    }

    /// Number of gray levels with a positive count.
    pub fn occupied_levels(&self) -> usize {
        self.counts.iter().filter(|&&c| c > 0).count()
    }
}

pub fn build_histogram(img: &GrayImage) -> Histogram {
    let mut counts = [0u64; LEVELS];
    for &p in img.pixels() {
        counts[p as usize] += 1;
    }
    // GrayImage guarantees at least one pixel.
    Histogram::from_counts(counts).expect("non-empty image")
}

/// BT.601 luma, rounded half up.
pub fn to_grayscale(r: u8, g: u8, b: u8) -> u8 {
    // Integer weights keep the rounding exact: round(x) = floor(x + 0.5).
    let weighted = 299 * r as u32 + 587 * g as u32 + 114 * b as u32;
    ((weighted + 500) / 1000).min(255) as u8
}

/// Loads a PGM (P5, maxval 255) image, or a PNG when the `png` feature is on.
pub fn load_image(path: impl AsRef<Path>) -> Result<GrayImage> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    if bytes.starts_with(PNG_SIGNATURE) {
        return decode_png(&bytes);
    }
    decode_pgm(&bytes)
}

const PNG_SIGNATURE: &[u8] = b"\x89PNG\r\n\x1a\n";

#[cfg(feature = "png")]
fn decode_png(bytes: &[u8]) -> Result<GrayImage> {
    use png::{ColorType, Transformations};

    let mut decoder = png::Decoder::new(std::io::Cursor::new(bytes));
    decoder.set_transformations(Transformations::EXPAND | Transformations::STRIP_16);
    let mut reader = decoder
        .read_info()
        .map_err(|e| Error::MalformedHeader(format!("png: {e}")))?;
    let size = reader
        .output_buffer_size()
        .ok_or_else(|| Error::UnsupportedFormat("png: image too large".into()))?;
    let mut buf = vec![0; size];
    let info = reader
        .next_frame(&mut buf)
        .map_err(|e| Error::MalformedHeader(format!("png: {e}")))?;
    let data = &buf[..info.buffer_size()];
    let (width, height) = (info.width as usize, info.height as usize);
    let pixels: Vec<u8> = match info.color_type {
        ColorType::Grayscale => data.to_vec(),
        ColorType::GrayscaleAlpha => data.chunks_exact(2).map(|c| c[0]).collect(),
        ColorType::Rgb => data
            .chunks_exact(3)
            .map(|c| to_grayscale(c[0], c[1], c[2]))
            .collect(),
        ColorType::Rgba => data
            .chunks_exact(4)
            .map(|c| to_grayscale(c[0], c[1], c[2]))
            .collect(),
        ColorType::Indexed => {
            return Err(Error::UnsupportedFormat("png: unexpanded palette".into()))
        }
    };
    GrayImage::new(width, height, pixels)
}

#[cfg(not(feature = "png"))]
fn decode_png(_: &[u8]) -> Result<GrayImage> {
    Err(Error::UnsupportedFormat(
        "png support is disabled in this build".into(),
    ))
}

/// Decodes a binary PGM (P5) with maxval 255.
pub fn decode_pgm(bytes: &[u8]) -> Result<GrayImage> {
    let mut cursor = HeaderCursor { bytes, pos: 0 };
    match bytes.get(..2) {
        Some(b"P5") => cursor.pos = 2,
        Some([b'P', _]) => {
            return Err(Error::UnsupportedFormat(format!(
                "netpbm variant {} (only P5 is read)",
                String::from_utf8_lossy(&bytes[..2])
            )))
        }
        Some(_) => return Err(Error::UnsupportedFormat("unrecognized magic".into())),
        None => return Err(Error::MalformedHeader("missing magic number".into())),
    }
    let width = cursor.field("width")?;
    let height = cursor.field("height")?;
    let maxval = cursor.field("maxval")?;
    if maxval != 255 {
        return Err(Error::UnsupportedFormat(format!(
            "maxval {maxval} (only 255 is accepted)"
        )));
    }
    // Exactly one whitespace byte separates the header from the raster.
    match bytes.get(cursor.pos) {
        Some(b) if b.is_ascii_whitespace() => cursor.pos += 1,
        _ => {
            return Err(Error::MalformedHeader(
                "expected whitespace after maxval".into(),
            ))
        }
    }
    if width == 0 || height == 0 {
        return Err(Error::InvalidImage(format!(
            "dimensions {width}x{height} contain no pixels"
        )));
    }
    let len = width
        .checked_mul(height)
        .ok_or_else(|| Error::MalformedHeader("dimensions overflow".into()))?;
    let raster = &bytes[cursor.pos..];
    if raster.len() < len {
        return Err(Error::MalformedHeader(format!(
            "raster holds {} bytes, expected {len}",
            raster.len()
        )));
    }
    GrayImage::new(width, height, raster[..len].to_vec())
}

struct HeaderCursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl HeaderCursor<'_> {
    fn skip_space_and_comments(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b.is_ascii_whitespace() {
                self.pos += 1;
            } else if b == b'#' {
                while let Some(&c) = self.bytes.get(self.pos) {
                    self.pos += 1;
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    fn field(&mut self, name: &str) -> Result<usize> {
        let start = self.pos;
        self.skip_space_and_comments();
        if self.pos == start {
            return Err(Error::MalformedHeader(format!(
                "expected whitespace before {name}"
            )));
        }
        let digits = self.bytes[self.pos..]
            .iter()
            .take_while(|b| b.is_ascii_digit())
            .count();
        if digits == 0 {
            return Err(Error::MalformedHeader(format!("missing {name}")));
        }
        let text =
            std::str::from_utf8(&self.bytes[self.pos..self.pos + digits]).expect("ascii digits");
        self.pos += digits;
        text.parse()
            .map_err(|_| Error::MalformedHeader(format!("{name} {text} out of range")))
    }
}

fn encode_pgm(width: usize, height: usize, raster: &[u8]) -> Vec<u8> {
    let mut out = format!("P5\n{width} {height}\n255\n").into_bytes();
    out.extend_from_slice(raster);
    out
}

/// Writes a bi-level image as P5 PGM, black as byte 0 and white as byte 255.
pub fn write_bilevel(img: &BiLevelImage, path: impl AsRef<Path>) -> Result<()> {
    let bytes = encode_pgm(img.width(), img.height(), &img.to_bytes());
    write_atomic(path.as_ref(), &bytes)
}

/// Writes a gray-level image as P5 PGM.
pub fn write_gray(img: &GrayImage, path: impl AsRef<Path>) -> Result<()> {
    let bytes = encode_pgm(img.width(), img.height(), img.pixels());
    write_atomic(path.as_ref(), &bytes)
}

/// Writes through a temporary file in the destination directory and renames
/// it into place, so a failed write never leaves a partial file behind.
pub(crate) fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::io(path, e))?;
    tmp.write_all(bytes).map_err(|e| Error::io(path, e))?;
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}
