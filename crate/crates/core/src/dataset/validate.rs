use std::collections::{BTreeMap, HashMap};
use std::fmt;

use rayon::prelude::*;

use super::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Severity {
    Warning,
    Fatal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FindingCode {
    EmptyManifest,
    DuplicateId,
    LightPlacement,
    NonReferencePosition,
    IntensityNotReference,
    MissingReferenceExposure,
    DuplicateExposure,
    UnresolvedReference,
    WhiteBalanceMismatch,
    MissingImage,
    UndecodableImage,
    CropOutOfBounds,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Finding {
    pub capture_id: Option<String>,
    pub code: FindingCode,
    pub severity: Severity,
    pub message: String,
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Warning => "warning",
            Severity::Fatal => "fatal",
        };
        match &self.capture_id {
            Some(id) => write!(f, "{sev} [{id}] {:?}: {}", self.code, self.message),
            None => write!(f, "{sev} {:?}: {}", self.code, self.message),
        }
    }
}

/// Findings sorted by capture, then code, so reports do not depend on
/// capture order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub findings: Vec<Finding>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        !self.has_fatal()
    }

    pub fn has_fatal(&self) -> bool {
        self.findings.iter().any(|f| f.severity == Severity::Fatal)
    }

    pub fn fatal(&self) -> impl Iterator<Item = &Finding> {
        self.findings.iter().filter(|f| f.severity == Severity::Fatal)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.findings.is_empty() {
            return writeln!(f, "no findings");
        }
        for finding in &self.findings {
            writeln!(f, "{finding}")?;
        }
        Ok(())
    }
}

const WB_TOLERANCE: f64 = 1e-4;

fn fatal(id: Option<&str>, code: FindingCode, message: String) -> Finding {
    Finding { capture_id: id.map(str::to_string), code, severity: Severity::Fatal, message }
}

fn check_capture(kind: ExperimentKind, c: &CaptureConfig, out: &mut Vec<Finding>) {
    let id = Some(c.id.as_str());
    match (kind, c.light_angle, c.light_position) {
        (ExperimentKind::BackgroundTest, Some(_), None) => {}
        (ExperimentKind::BackgroundTest, _, _) => out.push(fatal(
            id,
            FindingCode::LightPlacement,
            "background tests need a light_angle and no light_position".into(),
        )),
        (_, None, Some(p)) => {
            if kind == ExperimentKind::ExposureTest && p != LightPosition::Lp0 {
                out.push(Finding {
                    capture_id: c.id.clone().into(),
                    code: FindingCode::NonReferencePosition,
                    severity: Severity::Warning,
                    message: format!("exposure captures are normally lit from LP0, got {p}"),
                });
            }
        }
        _ => out.push(fatal(
            id,
            FindingCode::LightPlacement,
            format!("{} tests need a light_position and no light_angle", kind.as_str()),
        )),
    }
    if kind == ExperimentKind::ExposureTest && c.intensity != Intensity::Li0 {
        out.push(fatal(
            id,
            FindingCode::IntensityNotReference,
            format!("exposure captures must use LI0, got {}", c.intensity),
        ));
    }
    if let Some(g) = c.wb_gains {
        let want = c.camera.white_balance();
        if (g.red - want.red).abs() > WB_TOLERANCE || (g.blue - want.blue).abs() > WB_TOLERANCE {
            out.push(fatal(
                id,
                FindingCode::WhiteBalanceMismatch,
                format!(
                    "gains ({}, {}) differ from the {} camera's ({}, {})",
                    g.red, g.blue, c.camera, want.red, want.blue
                ),
            ));
        }
    }
}

fn check_file(manifest: &Manifest, c: &CaptureConfig) -> Option<Finding> {
    let path = manifest.resolve(c);
    let id = Some(c.id.as_str());
    let bytes = match std::fs::read(&path) {
        Ok(b) => b,
        Err(e) => return Some(fatal(id, FindingCode::MissingImage, format!("{}: {e}", path.display()))),
    };
    match decode_raster(&bytes) {
        Err(e) => Some(fatal(id, FindingCode::UndecodableImage, format!("{}: {e}", path.display()))),
        Ok(img) => match c.crop {
            Some(rect) if !rect.fits(img.width(), img.height()) => Some(fatal(
                id,
                FindingCode::CropOutOfBounds,
                format!("crop {rect:?} exceeds {}x{} image", img.width(), img.height()),
            )),
            _ => None,
        },
    }
}

/// Checks manifest invariants and that every image exists and decodes.
pub fn validate(manifest: &Manifest) -> ValidationReport {
    let mut findings = Vec::new();
    if manifest.captures.is_empty() {
        findings.push(fatal(None, FindingCode::EmptyManifest, "manifest lists no captures".into()));
    }

    let mut seen: HashMap<&str, usize> = HashMap::new();
    for c in &manifest.captures {
        *seen.entry(c.id.as_str()).or_default() += 1;
    }
    for (id, n) in &seen {
        if *n > 1 {
            findings.push(fatal(Some(id), FindingCode::DuplicateId, format!("id used by {n} captures")));
        }
    }

    for c in &manifest.captures {
        check_capture(manifest.kind, c, &mut findings);
    }

    match (&manifest.reference, manifest.kind) {
        (ReferenceSpec::GroupEx0, ExperimentKind::ExposureTest) => {}
        (ReferenceSpec::GroupEx0, kind) => findings.push(fatal(
            None,
            FindingCode::UnresolvedReference,
            format!("per-group EX0 reference only applies to exposure tests, not {}", kind.as_str()),
        )),
        (_, ExperimentKind::ExposureTest) => findings.push(fatal(
            None,
            FindingCode::UnresolvedReference,
            "exposure tests are referenced to each group's EX0 capture".into(),
        )),
        (ReferenceSpec::Capture(id), _) if manifest.capture(id).is_none() => findings.push(fatal(
            None,
            FindingCode::UnresolvedReference,
            format!("reference capture {id:?} is not in the manifest"),
        )),
        _ => {}
    }

    if manifest.kind == ExperimentKind::ExposureTest {
        let mut groups: BTreeMap<(Camera, Lamp), BTreeMap<ExposureLabel, Vec<&str>>> = BTreeMap::new();
        for c in &manifest.captures {
            groups.entry((c.camera, c.lamp)).or_default().entry(c.exposure).or_default().push(&c.id);
        }
        for ((camera, lamp), labels) in &groups {
            if !labels.contains_key(&ExposureLabel::Ex0) {
                findings.push(fatal(
                    None,
                    FindingCode::MissingReferenceExposure,
                    format!("group ({camera}, {lamp}) has no EX0 capture"),
                ));
            }
            for (label, ids) in labels.iter().filter(|(_, ids)| ids.len() > 1) {
                let mut ids = ids.clone();
                ids.sort_unstable();
                findings.push(fatal(
                    None,
                    FindingCode::DuplicateExposure,
                    format!("group ({camera}, {lamp}) has {label} {} times: {}", ids.len(), ids.join(", ")),
                ));
            }
        }
    }

    let file_findings: Vec<Option<Finding>> = manifest.captures.par_iter().map(|c| check_file(manifest, c)).collect();
    findings.extend(file_findings.into_iter().flatten());

    findings.sort();
    findings.dedup();
    ValidationReport { findings }
}
