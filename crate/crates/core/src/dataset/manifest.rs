use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::*;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ManifestFile {
    experiment: ExperimentBlock,
    #[serde(default, rename = "capture")]
    captures: Vec<CaptureEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ExperimentBlock {
    id: String,
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    reference: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    camera_to_object_cm: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    object_to_background_cm: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    camera_to_background_cm: Option<f64>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CaptureEntry {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    id: Option<String>,
    image: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    camera: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    background: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    lamp: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    intensity: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    exposure: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    light_angle: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    light_position: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    wb_gains: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    crop: Option<[usize; 4]>,
}

fn field<T: FromStr>(
    capture: &str,
    key: &str,
    explicit: &Option<String>,
    inferred: Option<T>,
) -> Result<Option<T>, DatasetError>
where
    T::Err: std::fmt::Display,
{
    match explicit {
        Some(text) => {
            text.parse().map(Some).map_err(|e| DatasetError::Manifest(format!("capture {capture}: {key}: {e}")))
        }
        None => Ok(inferred),
    }
}

fn required<T>(capture: &str, key: &str, value: Option<T>) -> Result<T, DatasetError> {
    value.ok_or_else(|| DatasetError::Manifest(format!("capture {capture}: missing {key}")))
}

fn convert_capture(index: usize, entry: &CaptureEntry) -> Result<CaptureConfig, DatasetError> {
    let stem = Path::new(&entry.image).file_stem().and_then(|s| s.to_str()).unwrap_or_default().to_string();
    let id = entry.id.clone().unwrap_or_else(|| stem.clone());
    if id.is_empty() {
        return Err(DatasetError::Manifest(format!("capture #{}: empty id", index + 1)));
    }
    let name = entry.name.as_deref().unwrap_or(&stem);
    let hint = match (&entry.name, parse_capture_name(name)) {
        (_, Ok(p)) => p,
        (Some(n), Err(_)) => {
            return Err(DatasetError::Manifest(format!("capture {id}: name {n:?} follows no known convention")))
        }
        (None, Err(_)) => PartialCapture::default(),
    };
    let exposure = match &entry.exposure {
        Some(text) => Some(
            text.parse::<ExposureLabel>()
                .map_err(|e| DatasetError::Manifest(format!("capture {id}: exposure: {e}")))?,
        ),
        None => hint.exposure,
    };
    let camera = field(&id, "camera", &entry.camera, hint.camera)?;
    let background = field(&id, "background", &entry.background, hint.background)?;
    let lamp = field(&id, "lamp", &entry.lamp, hint.lamp)?;
    let intensity = field(&id, "intensity", &entry.intensity, hint.intensity)?;
    let light_angle = field(&id, "light_angle", &entry.light_angle, hint.light_angle)?;
    let light_position = field(&id, "light_position", &entry.light_position, hint.light_position)?;
    Ok(CaptureConfig {
        camera: required(&id, "camera", camera)?,
        background: required(&id, "background", background)?,
        lamp: required(&id, "lamp", lamp)?,
        intensity: required(&id, "intensity", intensity)?,
        exposure: required(&id, "exposure", exposure)?,
        light_angle,
        light_position,
        wb_gains: entry.wb_gains.map(|[red, blue]| WbGains { red, blue }),
        crop: entry.crop.map(|[x0, y0, w, h]| CropRect::new(x0, y0, w, h)),
        image_path: PathBuf::from(&entry.image),
        id,
    })
}

/// Parses manifest text; `base_dir` anchors relative image paths.
pub fn parse_manifest(text: &str, base_dir: impl Into<PathBuf>) -> Result<Manifest, DatasetError> {
    let file: ManifestFile = toml::from_str(text).map_err(|e| DatasetError::Manifest(e.message().to_string()))?;
    let exp = file.experiment;
    let kind = ExperimentKind::parse(&exp.kind)
        .ok_or_else(|| DatasetError::Manifest(format!("unknown experiment kind {:?}", exp.kind)))?;
    let reference = match &exp.reference {
        None => kind.default_reference(),
        Some(r) => ReferenceSpec::parse(r).ok_or_else(|| DatasetError::Manifest(format!("unknown reference {r:?}")))?,
    };
    let captures =
        file.captures.iter().enumerate().map(|(i, c)| convert_capture(i, c)).collect::<Result<Vec<_>, _>>()?;
    Ok(Manifest {
        experiment_id: exp.id,
        kind,
        captures,
        reference,
        geometry: Geometry {
            camera_to_object_cm: exp.camera_to_object_cm,
            object_to_background_cm: exp.object_to_background_cm,
            camera_to_background_cm: exp.camera_to_background_cm,
        },
        base_dir: base_dir.into(),
    })
}

pub fn load_manifest(path: impl AsRef<Path>) -> Result<Manifest, DatasetError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| DatasetError::Io { path: path.to_path_buf(), message: e.to_string() })?;
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    parse_manifest(&text, base)
}

pub(super) fn render_manifest(m: &Manifest) -> String {
    let show = |s: &str| Some(s.to_string());
    let file = ManifestFile {
        experiment: ExperimentBlock {
            id: m.experiment_id.clone(),
            kind: m.kind.as_str().to_string(),
            reference: Some(m.reference.render()),
            camera_to_object_cm: m.geometry.camera_to_object_cm,
            object_to_background_cm: m.geometry.object_to_background_cm,
            camera_to_background_cm: m.geometry.camera_to_background_cm,
        },
        captures: m
            .captures
            .iter()
            .map(|c| CaptureEntry {
                id: Some(c.id.clone()),
                image: c.image_path.to_string_lossy().replace('\\', "/"),
                name: None,
                camera: show(c.camera.as_str()),
                background: show(c.background.as_str()),
                lamp: show(c.lamp.as_str()),
                intensity: show(c.intensity.as_str()),
                exposure: show(c.exposure.as_str()),
                light_angle: c.light_angle.map(|v| v.to_string()),
                light_position: c.light_position.map(|v| v.to_string()),
                wb_gains: c.wb_gains.map(|g| [g.red, g.blue]),
                crop: c.crop.map(|r| [r.x0, r.y0, r.w, r.h]),
            })
            .collect(),
    };
    toml::to_string(&file).expect("manifest is always representable")
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"
[experiment]
id = "demo"
kind = "background"
camera_to_object_cm = 140.0

[[capture]]
image = "img/CP0_LQ_BG0_LAMP0_LIH_EX0_LA0.pgm"

[[capture]]
id = "explicit"
image = "img/other.pgm"
name = "LQ_BG1_LAMP2_LIL_EX0_LA4"
background = "BG2"
wb_gains = [1.4883, 1.2539]
crop = [1, 2, 3, 4]
"#;

    #[test]
    fn parses_and_infers_from_names() {
        let m = parse_manifest(SAMPLE, "/data").unwrap();
        assert_eq!(m.kind, ExperimentKind::BackgroundTest);
        assert_eq!(m.reference, ReferenceSpec::SyntheticBlack);
        assert_eq!(m.geometry.camera_to_object_cm, Some(140.0));
        let a = &m.captures[0];
        assert_eq!(a.id, "CP0_LQ_BG0_LAMP0_LIH_EX0_LA0");
        assert_eq!(a.light_angle, Some(LightAngle::La0));
        let b = &m.captures[1];
        assert_eq!(b.background, Background::Bg2, "explicit key wins over name");
        assert_eq!(b.lamp, Lamp::Lamp2);
        assert_eq!(b.crop, Some(CropRect::new(1, 2, 3, 4)));
        assert_eq!(m.resolve(b), PathBuf::from("/data/img/other.pgm"));
    }

    #[test]
    fn render_round_trips() {
        let m = parse_manifest(SAMPLE, "/data").unwrap();
        let again = parse_manifest(&m.to_toml(), "/data").unwrap();
        assert_eq!(again, m);
    }

    #[test]
    fn errors_are_descriptive() {
        let missing = "[experiment]\nid='x'\nkind='background'\n[[capture]]\nimage='a.pgm'\n";
        let err = parse_manifest(missing, ".").unwrap_err().to_string();
        assert!(err.contains("missing camera"), "{err}");
        let kind = "[experiment]\nid='x'\nkind='party'\n";
        assert!(parse_manifest(kind, ".").is_err());
        let bad_label = "[experiment]\nid='x'\nkind='exposure'\n[[capture]]\nimage='a.pgm'\ncamera='MQ'\n";
        let err = parse_manifest(bad_label, ".").unwrap_err().to_string();
        assert!(err.contains("camera"), "{err}");
        assert!(parse_manifest("not toml [", ".").is_err());
        let unknown_key = "[experiment]\nid='x'\nkind='exposure'\ncolour='red'\n";
        assert!(parse_manifest(unknown_key, ".").is_err());
    }

    #[test]
    fn reference_forms() {
        assert_eq!(ReferenceSpec::parse("capture:abc"), Some(ReferenceSpec::Capture("abc".into())));
        assert_eq!(ReferenceSpec::parse("capture:"), None);
        for r in [ReferenceSpec::SyntheticBlack, ReferenceSpec::GroupEx0, ReferenceSpec::Capture("z".into())] {
            assert_eq!(ReferenceSpec::parse(&r.render()), Some(r));
        }
    }
}
