//! Raster decoding, luminance conversion and cropping.
//!
//! Every metric in this crate consumes an [`Image`]: a row-major grid of
//! luminance samples normalized to `[0, 1]`, optionally carrying the three
//! colour planes it was derived from. The only mandatory codec is binary
//! portable anymap (`P5` grayscale, `P6` RGB) with `maxval` 255.

use thiserror::Error;

/// Rec. 601 luma weights for R, G and B.
pub const LUMA_WEIGHTS: [f64; 3] = [0.299, 0.587, 0.114];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ImageError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unsupported format: {0}")]
    UnsupportedFormat(String),
    #[error("crop {rect:?} exceeds image bounds {width}x{height}")]
    Bounds { rect: CropRect, width: usize, height: usize },
    #[error("invalid image: {0}")]
    Invalid(String),
}

/// Three colour planes, each the same size as the luma grid.
#[derive(Debug, Clone, PartialEq)]
pub struct RgbPlanes {
    pub r: Vec<f64>,
    pub g: Vec<f64>,
    pub b: Vec<f64>,
}

/// Owned 2-D luminance grid, row-major, samples in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Image {
    width: usize,
    height: usize,
    luma: Vec<f64>,
    rgb: Option<RgbPlanes>,
    bit_depth_source: u8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CropRect {
    pub x0: usize,
    pub y0: usize,
    pub w: usize,
    pub h: usize,
}

impl CropRect {
    pub fn new(x0: usize, y0: usize, w: usize, h: usize) -> Self {
        CropRect { x0, y0, w, h }
    }

    pub fn full(img: &Image) -> Self {
        CropRect::new(0, 0, img.width(), img.height())
    }

    pub fn fits(&self, width: usize, height: usize) -> bool {
        self.w >= 1
            && self.h >= 1
            && self.x0.checked_add(self.w).is_some_and(|e| e <= width)
            && self.y0.checked_add(self.h).is_some_and(|e| e <= height)
    }
}

fn check_samples(name: &str, samples: &[f64]) -> Result<(), ImageError> {
    match samples.iter().position(|v| !(0.0..=1.0).contains(v)) {
        Some(i) => Err(ImageError::Invalid(format!("{name} sample {i} = {} outside [0, 1]", samples[i]))),
        None => Ok(()),
    }
}

impl Image {
    /// Builds a grayscale image, validating dimensions and sample range.
    pub fn from_luma(width: usize, height: usize, luma: Vec<f64>) -> Result<Self, ImageError> {
        if width == 0 || height == 0 {
            return Err(ImageError::Invalid(format!("dimensions must be at least 1x1, got {width}x{height}")));
        }
        if luma.len() != width * height {
            return Err(ImageError::Invalid(format!(
                "expected {} samples for {width}x{height}, got {}",
                width * height,
                luma.len()
            )));
        }
        check_samples("luma", &luma)?;
        Ok(Image { width, height, luma, rgb: None, bit_depth_source: 8 })
    }

    /// Builds a colour image; the luma grid is derived with [`LUMA_WEIGHTS`].
    pub fn from_rgb(width: usize, height: usize, rgb: RgbPlanes) -> Result<Self, ImageError> {
        let n = width * height;
        if width == 0 || height == 0 {
            return Err(ImageError::Invalid(format!("dimensions must be at least 1x1, got {width}x{height}")));
        }
        for (name, plane) in [("red", &rgb.r), ("green", &rgb.g), ("blue", &rgb.b)] {
            if plane.len() != n {
                return Err(ImageError::Invalid(format!("{name} plane has {} samples, expected {n}", plane.len())));
            }
            check_samples(name, plane)?;
        }
        let luma = luma_from_planes(&rgb);
        Ok(Image { width, height, luma, rgb: Some(rgb), bit_depth_source: 8 })
    }

    /// Constant image, e.g. the synthetic all-black reference.
    pub fn filled(width: usize, height: usize, level: f64) -> Result<Self, ImageError> {
        Image::from_luma(width, height, vec![level; width * height])
    }

    pub fn black(width: usize, height: usize) -> Self {
        Image::filled(width.max(1), height.max(1), 0.0).expect("zero is in range")
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn luma(&self) -> &[f64] {
        &self.luma
    }

    pub fn rgb(&self) -> Option<&RgbPlanes> {
        self.rgb.as_ref()
    }

    pub fn bit_depth_source(&self) -> u8 {
        self.bit_depth_source
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.luma[y * self.width + x]
    }

    pub fn row(&self, y: usize) -> &[f64] {
        &self.luma[y * self.width..(y + 1) * self.width]
    }

    /// Applies `f` to every luma sample, clamping the result into `[0, 1]`.
    /// Colour planes are dropped.
    pub fn map_luma(&self, f: impl Fn(f64) -> f64) -> Image {
        Image {
            width: self.width,
            height: self.height,
            luma: self.luma.iter().map(|&v| f(v).clamp(0.0, 1.0)).collect(),
            rgb: None,
            bit_depth_source: self.bit_depth_source,
        }
    }

    pub fn mean(&self) -> f64 {
        crate::metrics::stats::kahan_sum(self.luma.iter().copied()) / self.luma.len() as f64
    }
}

fn luma_from_planes(rgb: &RgbPlanes) -> Vec<f64> {
    // written relative to green so that neutral pixels map to exactly g
    let [wr, _, wb] = LUMA_WEIGHTS;
    rgb.r
        .iter()
        .zip(&rgb.g)
        .zip(&rgb.b)
        .map(|((&r, &g), &b)| (g + wr * (r - g) + wb * (b - g)).clamp(0.0, 1.0))
        .collect()
}

/// Drops the colour planes, keeping the BT.601 luma grid.
/// Grayscale input is returned unchanged.
pub fn to_luma(img: &Image) -> Image {
    match &img.rgb {
        None => img.clone(),
        Some(rgb) => Image {
            width: img.width,
            height: img.height,
            luma: luma_from_planes(rgb),
            rgb: None,
            bit_depth_source: img.bit_depth_source,
        },
    }
}

pub fn crop(img: &Image, rect: CropRect) -> Result<Image, ImageError> {
    if !rect.fits(img.width, img.height) {
        return Err(ImageError::Bounds { rect, width: img.width, height: img.height });
    }
    let take = |plane: &[f64]| -> Vec<f64> {
        let mut out = Vec::with_capacity(rect.w * rect.h);
        for y in rect.y0..rect.y0 + rect.h {
            let start = y * img.width + rect.x0;
            out.extend_from_slice(&plane[start..start + rect.w]);
        }
        out
    };
    Ok(Image {
        width: rect.w,
        height: rect.h,
        luma: take(&img.luma),
        rgb: img.rgb.as_ref().map(|p| RgbPlanes { r: take(&p.r), g: take(&p.g), b: take(&p.b) }),
        bit_depth_source: img.bit_depth_source,
    })
}

struct Header {
    magic: [u8; 2],
    width: usize,
    height: usize,
    maxval: usize,
    data_offset: usize,
}

fn parse_header(bytes: &[u8]) -> Result<Header, ImageError> {
    if bytes.len() < 2 {
        return Err(ImageError::Parse("missing magic number".into()));
    }
    let magic = [bytes[0], bytes[1]];
    match &magic {
        b"P5" | b"P6" => {}
        b"P1" | b"P2" | b"P3" | b"P4" | b"P7" => {
            return Err(ImageError::UnsupportedFormat(format!(
                "anymap variant {} is not supported",
                String::from_utf8_lossy(&magic)
            )))
        }
        _ => return Err(ImageError::Parse("not a portable anymap".into())),
    }

    let mut pos = 2;
    let mut fields = [0usize; 3];
    for (i, field) in fields.iter_mut().enumerate() {
        // whitespace and '#' comments may precede each header field
        let mut saw_space = false;
        while pos < bytes.len() {
            match bytes[pos] {
                b'#' => {
                    while pos < bytes.len() && bytes[pos] != b'\n' {
                        pos += 1;
                    }
                }
                c if c.is_ascii_whitespace() => {
                    saw_space = true;
                    pos += 1;
                }
                _ => break,
            }
        }
        if !saw_space {
            return Err(ImageError::Parse(format!("expected whitespace before header field {i}")));
        }
        let start = pos;
        while pos < bytes.len() && bytes[pos].is_ascii_digit() {
            pos += 1;
        }
        if start == pos {
            return Err(ImageError::Parse(format!("header field {i} is not a number")));
        }
        let text = std::str::from_utf8(&bytes[start..pos]).expect("ascii digits");
        *field = text.parse().map_err(|_| ImageError::Parse(format!("header field {i} overflows")))?;
    }
    // exactly one whitespace byte separates maxval from the raster
    match bytes.get(pos) {
        Some(c) if c.is_ascii_whitespace() => pos += 1,
        _ => return Err(ImageError::Parse("missing separator after maxval".into())),
    }
    let [width, height, maxval] = fields;
    if width == 0 || height == 0 {
        return Err(ImageError::Parse(format!("zero dimension {width}x{height}")));
    }
    if maxval == 0 || maxval > 65535 {
        return Err(ImageError::Parse(format!("invalid maxval {maxval}")));
    }
    Ok(Header { magic, width, height, maxval, data_offset: pos })
}

/// Decodes a binary PGM (`P5`) or PPM (`P6`) with 8-bit samples.
pub fn decode_raster(bytes: &[u8]) -> Result<Image, ImageError> {
    let header = parse_header(bytes)?;
    if header.maxval != 255 {
        return Err(ImageError::UnsupportedFormat(format!("maxval {} (only 255 is supported)", header.maxval)));
    }
    let channels = if &header.magic == b"P6" { 3 } else { 1 };
    let n = header
        .width
        .checked_mul(header.height)
        .and_then(|n| n.checked_mul(channels))
        .ok_or_else(|| ImageError::Parse("dimensions overflow".into()))?;
    let payload = &bytes[header.data_offset..];
    if payload.len() < n {
        return Err(ImageError::Parse(format!("truncated raster: expected {n} bytes, found {}", payload.len())));
    }
    let norm = |b: u8| b as f64 / 255.0;
    let payload = &payload[..n];
    if channels == 1 {
        Image::from_luma(header.width, header.height, payload.iter().map(|&b| norm(b)).collect())
    } else {
        let planes = RgbPlanes {
            r: payload.iter().step_by(3).map(|&b| norm(b)).collect(),
            g: payload.iter().skip(1).step_by(3).map(|&b| norm(b)).collect(),
            b: payload.iter().skip(2).step_by(3).map(|&b| norm(b)).collect(),
        };
        Image::from_rgb(header.width, header.height, planes)
    }
}

fn quantize(v: f64) -> u8 {
    (v * 255.0).round().clamp(0.0, 255.0) as u8
}

/// Encodes as `P6` when colour planes are present, otherwise `P5`.
pub fn encode_raster(img: &Image) -> Vec<u8> {
    let (magic, channels) = if img.rgb.is_some() { ("P6", 3) } else { ("P5", 1) };
    let mut out = format!("{magic}\n{} {}\n255\n", img.width, img.height).into_bytes();
    out.reserve(img.luma.len() * channels);
    match &img.rgb {
        None => out.extend(img.luma.iter().map(|&v| quantize(v))),
        Some(p) => {
            for i in 0..img.luma.len() {
                out.extend_from_slice(&[quantize(p.r[i]), quantize(p.g[i]), quantize(p.b[i])]);
            }
        }
    }
    out
}
