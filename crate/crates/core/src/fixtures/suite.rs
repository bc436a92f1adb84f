//! Ready-to-run synthetic experiments: images plus a manifest describing
//! them.
//!
//! * `background-suite[:WxH]` renders the background test grid (BG0..BG4 ×
//!   LIL/LIH × LAMP0..2 × LA0..4) for the LQ camera. Every image is the same
//!   faint texture scaled by a per-background reflectance and a
//!   per-condition illumination, so darker backgrounds are darker in every
//!   condition and the expected ranking is BG0, BG1, ..., BG4.
//! * `exposure-sweep[:WxH]` renders the nine exposure labels for LQ and HQ
//!   under each lamp, from a composite scene seeded per lamp. Default size
//!   256×256. The simulated LQ sensor has 6 bits and ±0.02 read noise, HQ
//!   has 8 bits and ±0.004, drawn afresh for every frame.
//! * Any scene descriptor (see [`SceneSpec`]) produces a nine-label sweep of
//!   that scene for HQ/LAMP0.

use std::io;
use std::path::{Path, PathBuf};

use super::{generate, hash_unit, quantize, SceneError, SceneKind, SceneSpec};
use crate::dataset::{
    Background, Camera, CaptureConfig, ExperimentKind, Geometry, Intensity, Lamp, LightAngle, LightPosition, Manifest,
    ReferenceSpec,
};
use crate::exposure::ExposureLabel;
use crate::imaging::encode_raster;
use crate::Image;

/// A manifest and the images it points at, not yet on disk.
#[derive(Debug, Clone, PartialEq)]
pub struct FixtureSet {
    pub manifest: Manifest,
    pub images: Vec<Image>,
}

impl FixtureSet {
    /// Writes every image as 8-bit PGM under `dir` and the manifest as
    /// `dir/manifest.toml`, returning the manifest path.
    pub fn write_to(&self, dir: &Path) -> io::Result<PathBuf> {
        for (capture, image) in self.manifest.captures.iter().zip(&self.images) {
            let path = dir.join(&capture.image_path);
            if let Some(parent) = path.parent() {
                std::fs::create_dir_all(parent)?;
            }
            std::fs::write(path, encode_raster(image))?;
        }
        std::fs::create_dir_all(dir)?;
        let path = dir.join("manifest.toml");
        std::fs::write(&path, self.manifest.to_toml())?;
        Ok(path)
    }

    /// The manifest with images resolved against `dir`, as `write_to(dir)`
    /// would leave it.
    pub fn manifest_at(&self, dir: &Path) -> Manifest {
        Manifest { base_dir: dir.to_path_buf(), ..self.manifest.clone() }
    }

    /// Builds a set from a `--spec` descriptor.
    pub fn from_descriptor(text: &str) -> Result<FixtureSet, SceneError> {
        let (name, size) = match text.split_once(':') {
            Some((n, s)) => (n, Some(s)),
            None => (text, None),
        };
        let dims = |default: (usize, usize)| -> Result<(usize, usize), SceneError> {
            match size {
                None => Ok(default),
                Some(s) => parse_size(s).ok_or_else(|| SceneError(format!("bad size {s:?}, expected WxH"))),
            }
        };
        match name {
            "background-suite" => {
                let (w, h) = dims((160, 120))?;
                background_suite(w, h)
            }
            "exposure-sweep" => {
                let (w, h) = dims((256, 256))?;
                exposure_suite(w, h)
            }
            _ => scene_sweep(&text.parse()?),
        }
    }
}

fn parse_size(s: &str) -> Option<(usize, usize)> {
    let (w, h) = s.split_once('x')?;
    Some((w.parse().ok()?, h.parse().ok()?))
}

fn capture(
    camera: Camera,
    background: Background,
    lamp: Lamp,
    intensity: Intensity,
    exposure: ExposureLabel,
    angle: Option<LightAngle>,
    position: Option<LightPosition>,
) -> CaptureConfig {
    let mut c = CaptureConfig {
        id: String::new(),
        camera,
        background,
        lamp,
        intensity,
        light_angle: angle,
        light_position: position,
        exposure,
        wb_gains: Some(camera.white_balance()),
        crop: None,
        image_path: PathBuf::new(),
    };
    c.id = c.canonical_name();
    c.image_path = PathBuf::from("images").join(format!("{}.pgm", c.id));
    c
}

/// Mean reflectance of each synthetic background, darkest first.
pub const SUITE_REFLECTANCE: [f64; 5] = [0.06, 0.10, 0.14, 0.18, 0.22];

fn lamp_output(lamp: Lamp) -> f64 {
    match lamp {
        Lamp::Lamp0 => 1.0,
        Lamp::Lamp1 => 0.8,
        Lamp::Lamp2 => 0.6,
    }
}

/// Relative irradiance of the background plane for each incidence angle,
/// the sine of LA0..LA4 to four places.
fn angle_factor(angle: LightAngle) -> f64 {
    match angle {
        LightAngle::La0 => 1.0,
        LightAngle::La1 => 0.9397,
        LightAngle::La2 => 0.766,
        LightAngle::La3 => 0.5,
        LightAngle::La4 => 0.1736,
    }
}

fn background_texture(width: usize, height: usize, angle: LightAngle) -> Vec<f64> {
    let tilt = 1.0 - angle_factor(angle);
    (0..width * height)
        .map(|i| {
            let x = (i % width) as f64 / width.max(2) as f64;
            let grain = hash_unit(0xB6, i as u64) - 0.5;
            1.0 + 0.3 * grain + 0.2 * tilt * (x - 0.5)
        })
        .collect()
}

pub fn background_suite(width: usize, height: usize) -> Result<FixtureSet, SceneError> {
    if width < 8 || height < 8 {
        return Err(SceneError(format!("background suite needs at least 8x8 pixels, got {width}x{height}")));
    }
    let camera = Camera::Lq;
    let mut captures = Vec::new();
    let mut images = Vec::new();
    let textures: Vec<Vec<f64>> = LightAngle::ALL.iter().map(|&a| background_texture(width, height, a)).collect();
    for (b, background) in Background::ALL.iter().copied().enumerate() {
        for intensity in [Intensity::Lil, Intensity::Lih] {
            for lamp in Lamp::ALL.iter().copied() {
                for (a, angle) in LightAngle::ALL.iter().copied().enumerate() {
                    let light = lamp_output(lamp) * intensity.percent(lamp) / 100.0 * angle_factor(angle);
                    let level = SUITE_REFLECTANCE[b] * (0.3 + 0.7 * light);
                    let data = textures[a].iter().map(|t| (level * t).clamp(0.0, 1.0)).collect();
                    let img = Image::from_luma(width, height, data).map_err(|e| SceneError(e.to_string()))?;
                    images.push(quantize(&img, 8));
                    captures.push(capture(camera, background, lamp, intensity, ExposureLabel::Ex0, Some(angle), None));
                }
            }
        }
    }
    Ok(FixtureSet {
        manifest: Manifest {
            experiment_id: "background-suite".into(),
            kind: ExperimentKind::BackgroundTest,
            captures,
            reference: ReferenceSpec::SyntheticBlack,
            geometry: Geometry::REFERENCE,
            base_dir: PathBuf::new(),
        },
        images,
    })
}

/// Simulated sensor bit depth of each camera.
pub fn sensor_bits(camera: Camera) -> u32 {
    match camera {
        Camera::Lq => 6,
        Camera::Hq => 8,
    }
}

/// Half-width of the uniform read noise added to every frame.
pub fn sensor_noise(camera: Camera) -> f64 {
    match camera {
        Camera::Lq => 0.02,
        Camera::Hq => 0.004,
    }
}

/// One captured frame: exposure change, fresh read noise, clipping and
/// quantization, in that order.
pub fn capture_frame(base: &Image, camera: Camera, stream: u64, stop_offset: f64) -> Image {
    let gain = stop_offset.exp2();
    let amp = sensor_noise(camera);
    let data = base
        .luma()
        .iter()
        .enumerate()
        .map(|(i, &v)| (v * gain + amp * (2.0 * hash_unit(stream, i as u64) - 1.0)).clamp(0.0, 1.0))
        .collect();
    let frame = Image::from_luma(base.width(), base.height(), data).expect("same dimensions");
    quantize(&frame, sensor_bits(camera))
}

fn sweep(base: &Image, camera: Camera, lamp: Lamp, captures: &mut Vec<CaptureConfig>, images: &mut Vec<Image>) {
    for label in ExposureLabel::ALL {
        let stream = 0x5EED_0000 + ((camera as u64) << 16) + ((lamp as u64) << 8) + label as u64;
        images.push(capture_frame(base, camera, stream, label.nominal_stop_offset() as f64));
        captures.push(capture(camera, Background::Bg0, lamp, Intensity::Li0, label, None, Some(LightPosition::Lp0)));
    }
}

fn exposure_manifest(id: &str, captures: Vec<CaptureConfig>) -> Manifest {
    Manifest {
        experiment_id: id.into(),
        kind: ExperimentKind::ExposureTest,
        captures,
        reference: ReferenceSpec::GroupEx0,
        geometry: Geometry::REFERENCE,
        base_dir: PathBuf::new(),
    }
}

pub fn exposure_suite(width: usize, height: usize) -> Result<FixtureSet, SceneError> {
    let mut captures = Vec::new();
    let mut images = Vec::new();
    for (i, lamp) in Lamp::ALL.iter().copied().enumerate() {
        let spec = SceneSpec::new(SceneKind::CompositeScene { seed: 42 + i as u64 }, width, height);
        let base = generate(&spec)?;
        for camera in Camera::ALL.iter().copied() {
            sweep(&base, camera, lamp, &mut captures, &mut images);
        }
    }
    Ok(FixtureSet { manifest: exposure_manifest("exposure-sweep", captures), images })
}

pub fn scene_sweep(spec: &SceneSpec) -> Result<FixtureSet, SceneError> {
    let base = generate(spec)?;
    let (mut captures, mut images) = (Vec::new(), Vec::new());
    sweep(&base, Camera::Hq, Lamp::Lamp0, &mut captures, &mut images);
    Ok(FixtureSet { manifest: exposure_manifest("scene-sweep", captures), images })
}
