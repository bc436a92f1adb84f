//! Background featurelessness ranking and exposure degradation curves.

use std::collections::BTreeMap;

use rayon::prelude::*;
use thiserror::Error;

use crate::dataset::{
    load_captures, validate, Background, Camera, CaptureConfig, DatasetError, ExperimentKind, Lamp, LoadedCapture,
    Manifest, ReferenceSpec,
};
use crate::exposure::ExposureLabel;
use crate::metrics::{kahan_sum, ms_ssim, uqi_stabilized, MetricError, UqiParams};
use crate::Image;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error("expected a {expected} manifest, got {found}")]
    WrongKind { expected: &'static str, found: &'static str },
    #[error("manifest failed validation:\n{0}")]
    Invalid(String),
    #[error(transparent)]
    Dataset(#[from] DatasetError),
    #[error("capture {capture_id}: {source}")]
    Metric { capture_id: String, source: MetricError },
    #[error("no captures to analyse")]
    Empty,
    #[error("group ({camera}, {lamp}): {message}")]
    Group { camera: Camera, lamp: Lamp, message: String },
    #[error("reference capture {0:?} not found")]
    Reference(String),
    #[error("curve ({camera}, {lamp}) lacks {missing} for the symmetry index")]
    MissingPair { camera: Camera, lamp: Lamp, missing: ExposureLabel },
}

/// One capture's score.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionScore {
    pub config: CaptureConfig,
    pub uqi: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BackgroundScore {
    pub background: Background,
    /// Sorted by experimental coordinates.
    pub per_condition: Vec<ConditionScore>,
    pub mean_uqi: f64,
    /// Population standard deviation over conditions.
    pub std_uqi: f64,
    /// 1 is the most featureless.
    pub rank: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub label: ExposureLabel,
    pub ev: f64,
    pub ms_ssim: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DegradationCurve {
    pub camera: Camera,
    pub lamp: Lamp,
    /// Ordered by EV descending, EEU first.
    pub points: Vec<CurvePoint>,
}

impl DegradationCurve {
    pub fn point(&self, label: ExposureLabel) -> Option<&CurvePoint> {
        self.points.iter().find(|p| p.label == label)
    }

    pub fn series_name(&self) -> String {
        format!("{}-{}", self.camera, self.lamp)
    }
}

fn prepare(manifest: &Manifest, kind: ExperimentKind) -> Result<Vec<LoadedCapture>, AnalysisError> {
    if manifest.kind != kind {
        return Err(AnalysisError::WrongKind { expected: kind.as_str(), found: manifest.kind.as_str() });
    }
    let report = validate(manifest);
    if report.has_fatal() {
        let lines: Vec<String> = report.fatal().map(|f| f.to_string()).collect();
        return Err(AnalysisError::Invalid(lines.join("\n")));
    }
    Ok(load_captures(manifest)?)
}

/// Validates, loads and ranks a background-test manifest.
pub fn background_rank(manifest: &Manifest) -> Result<Vec<BackgroundScore>, AnalysisError> {
    let captures = prepare(manifest, ExperimentKind::BackgroundTest)?;
    rank_backgrounds(&captures, &manifest.reference, UqiParams::default())
}

/// Scores every capture with stabilized UQI against the reference, groups
/// by background and ranks by mean score, highest first. Ties go to the
/// lower standard deviation, then the lower background label.
pub fn rank_backgrounds(
    captures: &[LoadedCapture],
    reference: &ReferenceSpec,
    params: UqiParams,
) -> Result<Vec<BackgroundScore>, AnalysisError> {
    if captures.is_empty() {
        return Err(AnalysisError::Empty);
    }
    let fixed_reference = match reference {
        ReferenceSpec::SyntheticBlack => None,
        ReferenceSpec::Capture(id) => Some(
            captures
                .iter()
                .find(|c| &c.config.id == id)
                .map(|c| &c.image)
                .ok_or_else(|| AnalysisError::Reference(id.clone()))?,
        ),
        ReferenceSpec::GroupEx0 => return Err(AnalysisError::WrongKind { expected: "background", found: "exposure" }),
    };
    let scores: Vec<ConditionScore> = captures
        .par_iter()
        .map(|c| {
            let black;
            let reference = match fixed_reference {
                Some(r) => r,
                None => {
                    black = Image::black(c.image.width(), c.image.height());
                    &black
                }
            };
            uqi_stabilized(&c.image, reference, params)
                .map(|s| ConditionScore { config: c.config.clone(), uqi: s.value })
                .map_err(|source| AnalysisError::Metric { capture_id: c.config.id.clone(), source })
        })
        .collect::<Result<_, _>>()?;

    let mut groups: BTreeMap<Background, Vec<ConditionScore>> = BTreeMap::new();
    for s in scores {
        groups.entry(s.config.background).or_default().push(s);
    }
    let mut out: Vec<BackgroundScore> = groups
        .into_iter()
        .map(|(background, mut per_condition)| {
            per_condition.sort_by(|a, b| a.config.sort_key().cmp(&b.config.sort_key()));
            let n = per_condition.len() as f64;
            let mean_uqi = kahan_sum(per_condition.iter().map(|s| s.uqi)) / n;
            let var = kahan_sum(per_condition.iter().map(|s| (s.uqi - mean_uqi).powi(2))) / n;
            BackgroundScore { background, per_condition, mean_uqi, std_uqi: var.sqrt(), rank: 0 }
        })
        .collect();
    out.sort_by(|a, b| {
        b.mean_uqi.total_cmp(&a.mean_uqi).then(a.std_uqi.total_cmp(&b.std_uqi)).then(a.background.cmp(&b.background))
    });
    for (i, s) in out.iter_mut().enumerate() {
        s.rank = i + 1;
    }
    Ok(out)
}

/// Validates, loads and builds one degradation curve per (camera, lamp).
pub fn exposure_curve(manifest: &Manifest) -> Result<Vec<DegradationCurve>, AnalysisError> {
    let captures = prepare(manifest, ExperimentKind::ExposureTest)?;
    degradation_curves(&captures)
}

/// MS-SSIM of every capture against its group's EX0 frame. The EX0 point
/// itself is exactly 1.
pub fn degradation_curves(captures: &[LoadedCapture]) -> Result<Vec<DegradationCurve>, AnalysisError> {
    if captures.is_empty() {
        return Err(AnalysisError::Empty);
    }
    let mut groups: BTreeMap<(Camera, Lamp), BTreeMap<ExposureLabel, &LoadedCapture>> = BTreeMap::new();
    for c in captures {
        let group = groups.entry((c.config.camera, c.config.lamp)).or_default();
        if group.insert(c.config.exposure, c).is_some() {
            return Err(AnalysisError::Group {
                camera: c.config.camera,
                lamp: c.config.lamp,
                message: format!("more than one {} capture", c.config.exposure),
            });
        }
    }
    let mut jobs = Vec::new();
    for ((camera, lamp), labels) in &groups {
        let reference = labels.get(&ExposureLabel::Ex0).ok_or_else(|| AnalysisError::Group {
            camera: *camera,
            lamp: *lamp,
            message: "no EX0 reference capture".into(),
        })?;
        for (label, capture) in labels {
            jobs.push(((*camera, *lamp), *label, *capture, *reference));
        }
    }
    let values: Vec<f64> = jobs
        .par_iter()
        .map(|(_, label, capture, reference)| {
            if *label == ExposureLabel::Ex0 {
                return Ok(1.0);
            }
            ms_ssim(&capture.image, &reference.image, 5)
                .map(|s| s.value)
                .map_err(|source| AnalysisError::Metric { capture_id: capture.config.id.clone(), source })
        })
        .collect::<Result<_, _>>()?;

    let mut curves: BTreeMap<(Camera, Lamp), Vec<CurvePoint>> = BTreeMap::new();
    for ((key, label, _, _), value) in jobs.iter().zip(values) {
        curves.entry(*key).or_default().push(CurvePoint { label: *label, ev: label.ev(), ms_ssim: value });
    }
    Ok(curves
        .into_iter()
        .map(|((camera, lamp), mut points)| {
            points.sort_by_key(|p| p.label);
            DegradationCurve { camera, lamp, points }
        })
        .collect())
}

/// Mean absolute score difference between mirrored exposure labels.
/// Zero means under- and over-exposure degrade identically.
pub fn symmetry_index(curve: &DegradationCurve) -> Result<f64, AnalysisError> {
    let mut diffs = Vec::with_capacity(4);
    for k in 1..=4 {
        let under = ExposureLabel::from_stop_offset(-k).expect("label exists");
        let over = under.mirror();
        let value = |l: ExposureLabel| {
            curve.point(l).map(|p| p.ms_ssim).ok_or(AnalysisError::MissingPair {
                camera: curve.camera,
                lamp: curve.lamp,
                missing: l,
            })
        };
        diffs.push((value(under)? - value(over)?).abs());
    }
    Ok(kahan_sum(diffs) / 4.0)
}
