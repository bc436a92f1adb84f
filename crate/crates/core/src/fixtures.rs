//! Deterministic synthetic scenes and exposure sweeps.
//!
//! Pseudo-random values come from a counter-based hash so that any
//! implementation can regenerate a scene bit for bit: sample `i` of stream
//! `seed` is
//!
//! ```text
//! z = seed + (i + 1) * 0x9E3779B97F4A7C15            (wrapping u64)
//! z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//! z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//! z =  z ^ (z >> 31)
//! u = (z >> 11) / 2^53                                in [0, 1)
//! ```
//!
//! Scene geometry uses only `+ − × ÷` and `sqrt`, all correctly rounded
//! under IEEE 754, so generated rasters do not depend on the platform libm.

use std::fmt;
use std::str::FromStr;

use crate::exposure::simulate_exposure;
use crate::Image;

pub mod suite;

pub use suite::{background_suite, exposure_suite, scene_sweep, FixtureSet};

/// One output of the counter-based generator, in `[0, 1)`.
pub fn hash_unit(seed: u64, counter: u64) -> f64 {
    let mut z = seed.wrapping_add(counter.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^= z >> 31;
    (z >> 11) as f64 / (1u64 << 53) as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Horizontal,
    Vertical,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SceneKind {
    Flat(f64),
    LinearGradient {
        lo: f64,
        hi: f64,
        axis: Axis,
    },
    Checker {
        cell: usize,
        lo: f64,
        hi: f64,
    },
    /// Bright faceted cube on a near-black field.
    CompositeScene {
        seed: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SceneSpec {
    pub kind: SceneKind,
    pub width: usize,
    pub height: usize,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("invalid scene: {0}")]
pub struct SceneError(pub String);

impl SceneSpec {
    pub fn new(kind: SceneKind, width: usize, height: usize) -> Self {
        SceneSpec { kind, width, height }
    }

    pub fn validate(&self) -> Result<(), SceneError> {
        if self.width == 0 || self.height == 0 {
            return Err(SceneError(format!("dimensions {}x{}", self.width, self.height)));
        }
        let level = |v: f64| {
            if (0.0..=1.0).contains(&v) {
                Ok(())
            } else {
                Err(SceneError(format!("level {v} outside [0, 1]")))
            }
        };
        match self.kind {
            SceneKind::Flat(v) => level(v),
            SceneKind::LinearGradient { lo, hi, .. } => level(lo).and(level(hi)),
            SceneKind::Checker { cell, lo, hi } => {
                if cell == 0 {
                    return Err(SceneError("checker cell must be at least 1".into()));
                }
                level(lo).and(level(hi))
            }
            SceneKind::CompositeScene { .. } => Ok(()),
        }
    }
}

/// Compact textual form used on the command line:
/// `flat:<level>`, `gradient:<lo>:<hi>:<h|v>`, `checker:<cell>:<lo>:<hi>`
/// or `composite:<seed>`, each optionally followed by `:<W>x<H>`.
impl FromStr for SceneSpec {
    type Err = SceneError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || SceneError(format!("cannot parse scene descriptor {s:?}"));
        let mut parts: Vec<&str> = s.split(':').collect();
        let (width, height) = match parts.last().and_then(|p| p.split_once('x')) {
            Some((w, h)) if parts.len() > 1 => {
                let dims = (w.parse().map_err(|_| bad())?, h.parse().map_err(|_| bad())?);
                parts.pop();
                dims
            }
            _ => (256, 256),
        };
        let num = |i: usize| -> Result<f64, SceneError> { parts.get(i).ok_or_else(bad)?.parse().map_err(|_| bad()) };
        let kind = match (parts[0], parts.len()) {
            ("flat", 2) => SceneKind::Flat(num(1)?),
            ("gradient", 4) => SceneKind::LinearGradient {
                lo: num(1)?,
                hi: num(2)?,
                axis: match parts[3] {
                    "h" | "horizontal" => Axis::Horizontal,
                    "v" | "vertical" => Axis::Vertical,
                    _ => return Err(bad()),
                },
            },
            ("checker", 4) => {
                SceneKind::Checker { cell: parts[1].parse().map_err(|_| bad())?, lo: num(2)?, hi: num(3)? }
            }
            ("composite", 2) => SceneKind::CompositeScene { seed: parts[1].parse().map_err(|_| bad())? },
            _ => return Err(bad()),
        };
        let spec = SceneSpec { kind, width, height };
        spec.validate()?;
        Ok(spec)
    }
}

impl fmt::Display for SceneSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            SceneKind::Flat(v) => write!(f, "flat:{v}")?,
            SceneKind::LinearGradient { lo, hi, axis } => {
                let a = if axis == Axis::Horizontal { "h" } else { "v" };
                write!(f, "gradient:{lo}:{hi}:{a}")?
            }
            SceneKind::Checker { cell, lo, hi } => write!(f, "checker:{cell}:{lo}:{hi}")?,
            SceneKind::CompositeScene { seed } => write!(f, "composite:{seed}")?,
        }
        write!(f, ":{}x{}", self.width, self.height)
    }
}

pub fn generate(spec: &SceneSpec) -> Result<Image, SceneError> {
    spec.validate()?;
    let (w, h) = (spec.width, spec.height);
    let data: Vec<f64> = match spec.kind {
        SceneKind::Flat(v) => vec![v; w * h],
        SceneKind::LinearGradient { lo, hi, axis } => {
            let n = if axis == Axis::Horizontal { w } else { h };
            let ramp: Vec<f64> =
                (0..n).map(|i| if n == 1 { lo } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 }).collect();
            (0..w * h).map(|i| if axis == Axis::Horizontal { ramp[i % w] } else { ramp[i / w] }).collect()
        }
        SceneKind::Checker { cell, lo, hi } => {
            (0..w * h).map(|i| if ((i % w) / cell + (i / w) / cell) % 2 == 0 { lo } else { hi }).collect()
        }
        SceneKind::CompositeScene { seed } => composite(seed, w, h),
    };
    Image::from_luma(w, h, data).map_err(|e| SceneError(e.to_string()))
}

/// Signed area test: `true` when `p` lies inside the convex polygon, whose
/// vertices may be in either winding order.
fn inside_convex(poly: &[(f64, f64)], p: (f64, f64)) -> bool {
    let mut sign = 0.0;
    for i in 0..poly.len() {
        let (ax, ay) = poly[i];
        let (bx, by) = poly[(i + 1) % poly.len()];
        let cross = (bx - ax) * (p.1 - ay) - (by - ay) * (p.0 - ax);
        if cross != 0.0 {
            if sign == 0.0 {
                sign = cross.signum();
            } else if cross.signum() != sign {
                return false;
            }
        }
    }
    true
}

// Stream layout for the composite scene.
const GEOMETRY_STREAM: u64 = 0;
const NOISE_STREAM: u64 = 1 << 40;

fn composite(seed: u64, w: usize, h: usize) -> Vec<f64> {
    let g = |i: u64| hash_unit(seed, GEOMETRY_STREAM + i);
    let (wf, hf) = (w as f64, h as f64);
    let size = wf.min(hf);
    let cx = wf / 2.0 + (g(0) - 0.5) * 0.1 * wf;
    let cy = hf / 2.0 + (g(1) - 0.5) * 0.1 * hf;
    let r = size * (0.28 + 0.06 * g(2));
    let squash = 0.8 + 0.2 * g(3);
    let s3 = 3.0f64.sqrt() / 2.0;
    // pointy-top hexagon, y grows downwards, clockwise from the top vertex
    let unit = [(0.0, -1.0), (s3, -0.5), (s3, 0.5), (0.0, 1.0), (-s3, 0.5), (-s3, -0.5)];
    let v: Vec<(f64, f64)> = unit
        .iter()
        .enumerate()
        .map(|(i, &(ux, uy))| {
            let jx = (g(4 + 2 * i as u64) - 0.5) * 0.08;
            let jy = (g(5 + 2 * i as u64) - 0.5) * 0.08;
            (cx + r * (ux + jx), cy + r * squash * (uy + jy))
        })
        .collect();
    let c = (cx + (g(16) - 0.5) * 0.1 * r, cy + (g(17) - 0.5) * 0.1 * r);
    let faces = [[v[5], v[0], v[1], c], [c, v[1], v[2], v[3]], [v[5], c, v[3], v[4]]];
    let shade = [0.82 + 0.08 * g(18), 0.55 + 0.08 * g(19), 0.34 + 0.08 * g(20)];
    let pitch = 5 + (g(21) * 4.0) as usize;

    let mut out = Vec::with_capacity(w * h);
    for y in 0..h {
        for x in 0..w {
            let idx = (y * w + x) as u64;
            let noise = hash_unit(seed, NOISE_STREAM + idx) - 0.5;
            let p = (x as f64 + 0.5, y as f64 + 0.5);
            let face = faces.iter().position(|f| inside_convex(f, p));
            let value = match face {
                None => 0.03 + 0.02 * noise,
                Some(k) => {
                    // soft illumination falloff across the face plus a cell grid
                    let falloff = 1.0 - 0.25 * (p.0 - cx + p.1 - cy) / (2.0 * r);
                    let grid = if x % pitch == 0 || y % pitch == 0 { 0.8 } else { 1.0 };
                    shade[k] * falloff * grid + 0.05 * noise
                }
            };
            out.push(value.clamp(0.0, 1.0));
        }
    }
    out
}

/// Renders the scene once and applies each stop offset to it.
pub fn exposure_sweep(spec: &SceneSpec, offsets: &[f64]) -> Result<Vec<(f64, Image)>, SceneError> {
    let base = generate(spec)?;
    Ok(offsets.iter().map(|&k| (k, simulate_exposure(&base, k))).collect())
}

/// Rounds every sample to the nearest of `2^bits` evenly spaced levels.
pub fn quantize(img: &Image, bits: u32) -> Image {
    let levels = ((1u64 << bits.clamp(1, 16)) - 1) as f64;
    img.map_luma(|v| (v * levels).round() / levels)
}
