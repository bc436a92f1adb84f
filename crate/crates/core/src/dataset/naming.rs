//! Underscore-separated capture naming, e.g. `CP0_HQ_BG0_LAMP1_LIH_EX0_LA2`.
//!
//! Token order does not matter when parsing; rendering uses the order
//! camera position, camera, background, lamp, intensity, exposure,
//! light angle, light position. `E0` and `LIO` are accepted as spellings of
//! `EX0` and `LI0`.

use super::labels::*;
use super::DatasetError;
use crate::exposure::ExposureLabel;

/// Fields recovered from a capture name. Unset fields were not present.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PartialCapture {
    pub camera_position: Option<CameraPosition>,
    pub camera: Option<Camera>,
    pub background: Option<Background>,
    pub lamp: Option<Lamp>,
    pub intensity: Option<Intensity>,
    pub exposure: Option<ExposureLabel>,
    pub light_angle: Option<LightAngle>,
    pub light_position: Option<LightPosition>,
    /// Tokens that matched no field, or repeated an already filled field.
    pub unrecognized: Vec<String>,
}

fn set<T>(slot: &mut Option<T>, value: T) -> bool {
    if slot.is_some() {
        return false;
    }
    *slot = Some(value);
    true
}

fn assign(p: &mut PartialCapture, token: &str) -> bool {
    let t = match token.to_ascii_uppercase().as_str() {
        "E0" => "EX0".to_string(),
        "LIO" => "LI0".to_string(),
        other => other.to_string(),
    };
    if let Ok(v) = t.parse() {
        return set(&mut p.camera_position, v);
    }
    if let Ok(v) = t.parse() {
        return set(&mut p.camera, v);
    }
    if let Ok(v) = t.parse() {
        return set(&mut p.background, v);
    }
    if let Ok(v) = t.parse() {
        return set(&mut p.lamp, v);
    }
    if let Ok(v) = t.parse() {
        return set(&mut p.intensity, v);
    }
    if let Ok(v) = t.parse() {
        return set(&mut p.exposure, v);
    }
    if let Ok(v) = t.parse() {
        return set(&mut p.light_angle, v);
    }
    if let Ok(v) = t.parse() {
        return set(&mut p.light_position, v);
    }
    false
}

/// Parses a capture name; a trailing file extension is ignored.
pub fn parse_capture_name(name: &str) -> Result<PartialCapture, DatasetError> {
    let stem = std::path::Path::new(name).file_stem().and_then(|s| s.to_str()).unwrap_or(name);
    let mut p = PartialCapture::default();
    let mut recognized = 0;
    for token in stem.split('_').filter(|t| !t.is_empty()) {
        if assign(&mut p, token) {
            recognized += 1;
        } else {
            p.unrecognized.push(token.to_string());
        }
    }
    if recognized == 0 {
        return Err(DatasetError::NameConvention(name.to_string()));
    }
    Ok(p)
}

pub fn render_capture_name(p: &PartialCapture) -> String {
    let tokens: [Option<&'static str>; 8] = [
        p.camera_position.map(|v| v.as_str()),
        p.camera.map(|v| v.as_str()),
        p.background.map(|v| v.as_str()),
        p.lamp.map(|v| v.as_str()),
        p.intensity.map(|v| v.as_str()),
        p.exposure.map(|v| v.as_str()),
        p.light_angle.map(|v| v.as_str()),
        p.light_position.map(|v| v.as_str()),
    ];
    tokens.into_iter().flatten().collect::<Vec<_>>().join("_")
}
