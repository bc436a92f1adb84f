//! Capture manifests: what was photographed, under which conditions, and
//! where the image lives.
//!
//! A manifest is a TOML document with one `[experiment]` table and one
//! `[[capture]]` table per image:
//!
//! ```toml
//! [experiment]
//! id = "bg-lq"
//! kind = "background"          # background | exposure | lighting
//! reference = "black"          # black | ex0 | capture:<id>
//! camera_to_object_cm = 140.0  # optional, informational
//!
//! [[capture]]
//! id = "bg0-lih-lamp0-la0"
//! image = "images/CP0_LQ_BG0_LAMP0_LIH_EX0_LA0.pgm"
//! camera = "LQ"
//! background = "BG0"
//! lamp = "LAMP0"
//! intensity = "LIH"
//! exposure = "EX0"
//! light_angle = "LA0"          # or light_position = "LP0"
//! wb_gains = [1.4883, 1.2539]  # optional, checked against the camera
//! crop = [80, 0, 480, 480]     # optional x0, y0, w, h
//! ```
//!
//! Image paths are relative to the manifest file. Label fields missing from
//! a capture are filled from its `name` key, or failing that from the image
//! file name, using the naming convention in [`naming`]. Explicit keys
//! always win.

mod labels;
mod manifest;
pub mod naming;
mod validate;

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use thiserror::Error;

use crate::exposure::ExposureLabel;
use crate::imaging::{crop, decode_raster, to_luma, CropRect};
use crate::Image;

pub use labels::*;
pub use manifest::{load_manifest, parse_manifest};
pub use naming::{parse_capture_name, render_capture_name, PartialCapture};
pub use validate::{validate, Finding, FindingCode, Severity, ValidationReport};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DatasetError {
    #[error("no recognized tokens in capture name {0:?}")]
    NameConvention(String),
    #[error("manifest error: {0}")]
    Manifest(String),
    #[error("cannot read {path}: {message}")]
    Io { path: PathBuf, message: String },
    #[error("capture {capture_id}: {message}")]
    Ingest { capture_id: String, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExperimentKind {
    BackgroundTest,
    ExposureTest,
    LightingTest,
}

impl ExperimentKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ExperimentKind::BackgroundTest => "background",
            ExperimentKind::ExposureTest => "exposure",
            ExperimentKind::LightingTest => "lighting",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "background" | "backgroundtest" => Some(ExperimentKind::BackgroundTest),
            "exposure" | "exposuretest" => Some(ExperimentKind::ExposureTest),
            "lighting" | "lightingtest" => Some(ExperimentKind::LightingTest),
            _ => None,
        }
    }

    pub fn default_reference(&self) -> ReferenceSpec {
        match self {
            ExperimentKind::ExposureTest => ReferenceSpec::GroupEx0,
            _ => ReferenceSpec::SyntheticBlack,
        }
    }
}

/// What each capture is compared against.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReferenceSpec {
    /// All-zero image at the capture's post-crop size.
    SyntheticBlack,
    /// The EX0 capture of the same (camera, lamp) group.
    GroupEx0,
    /// One named capture.
    Capture(String),
}

impl ReferenceSpec {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "black" => Some(ReferenceSpec::SyntheticBlack),
            "ex0" => Some(ReferenceSpec::GroupEx0),
            _ => {
                s.strip_prefix("capture:").filter(|id| !id.is_empty()).map(|id| ReferenceSpec::Capture(id.to_string()))
            }
        }
    }

    pub fn render(&self) -> String {
        match self {
            ReferenceSpec::SyntheticBlack => "black".into(),
            ReferenceSpec::GroupEx0 => "ex0".into(),
            ReferenceSpec::Capture(id) => format!("capture:{id}"),
        }
    }
}

/// Experimental coordinates of one capture.
#[derive(Debug, Clone, PartialEq)]
pub struct CaptureConfig {
    pub id: String,
    pub camera: Camera,
    pub background: Background,
    pub lamp: Lamp,
    pub intensity: Intensity,
    pub light_angle: Option<LightAngle>,
    pub light_position: Option<LightPosition>,
    pub exposure: ExposureLabel,
    pub wb_gains: Option<WbGains>,
    pub crop: Option<CropRect>,
    /// As written in the manifest, relative to the manifest directory.
    pub image_path: PathBuf,
}

impl CaptureConfig {
    pub fn partial(&self) -> PartialCapture {
        PartialCapture {
            camera_position: Some(CameraPosition::Cp0),
            camera: Some(self.camera),
            background: Some(self.background),
            lamp: Some(self.lamp),
            intensity: Some(self.intensity),
            exposure: Some(self.exposure),
            light_angle: self.light_angle,
            light_position: self.light_position,
            unrecognized: Vec::new(),
        }
    }

    /// Conventional file stem for this capture.
    pub fn canonical_name(&self) -> String {
        render_capture_name(&self.partial())
    }

    /// Illumination condition, independent of camera and background.
    pub fn condition_label(&self) -> String {
        let place = match (self.light_angle, self.light_position) {
            (Some(a), _) => a.as_str(),
            (None, Some(p)) => p.as_str(),
            (None, None) => "-",
        };
        format!("{}/{}/{}", self.lamp, self.intensity, place)
    }

    /// Total order over experimental coordinates, ties broken by id.
    pub fn sort_key(&self) -> impl Ord + '_ {
        (
            self.camera,
            self.background,
            self.lamp,
            self.intensity,
            self.light_angle,
            self.light_position,
            self.exposure,
            self.id.as_str(),
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Manifest {
    pub experiment_id: String,
    pub kind: ExperimentKind,
    pub captures: Vec<CaptureConfig>,
    pub reference: ReferenceSpec,
    pub geometry: Geometry,
    /// Directory image paths are resolved against.
    pub base_dir: PathBuf,
}

impl Manifest {
    pub fn resolve(&self, capture: &CaptureConfig) -> PathBuf {
        self.base_dir.join(&capture.image_path)
    }

    pub fn capture(&self, id: &str) -> Option<&CaptureConfig> {
        self.captures.iter().find(|c| c.id == id)
    }

    pub fn to_toml(&self) -> String {
        manifest::render_manifest(self)
    }
}

/// A capture together with its decoded, cropped luma image.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedCapture {
    pub config: CaptureConfig,
    pub image: Image,
}

/// Reads, decodes, crops and converts one capture to luma.
pub fn load_capture(path: &Path, config: &CaptureConfig) -> Result<Image, DatasetError> {
    let ingest = |message: String| DatasetError::Ingest { capture_id: config.id.clone(), message };
    let bytes = std::fs::read(path).map_err(|e| ingest(format!("{}: {e}", path.display())))?;
    let img = decode_raster(&bytes).map_err(|e| ingest(format!("{}: {e}", path.display())))?;
    let img = match config.crop {
        Some(rect) => crop(&img, rect).map_err(|e| ingest(e.to_string()))?,
        None => img,
    };
    Ok(to_luma(&img))
}

/// Decodes every capture, concurrently, returning them in manifest order.
/// On failure the first failing capture in manifest order is reported.
pub fn load_captures(manifest: &Manifest) -> Result<Vec<LoadedCapture>, DatasetError> {
    manifest
        .captures
        .par_iter()
        .map(|c| load_capture(&manifest.resolve(c), c).map(|image| LoadedCapture { config: c.clone(), image }))
        .collect::<Vec<_>>()
        .into_iter()
        .collect()
}
