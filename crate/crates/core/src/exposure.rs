//! Exposure tuples, exposure values and synthetic exposure changes.
//!
//! EV is ISO-adjusted: `log2(N² / t) − log2(ISO / 100)`. One stop is one
//! EV unit; a longer shutter or a higher ISO lowers EV.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::Image;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExposureError {
    #[error("{field} must be positive and finite, got {value}")]
    Domain { field: &'static str, value: f64 },
    #[error("cannot parse {0:?} as a duration in seconds")]
    Syntax(String),
    #[error("unknown exposure label {0:?}")]
    UnknownLabel(String),
}

/// `(A:SS:ISO)`: f-number, shutter time in seconds, sensitivity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExposureTuple {
    aperture_n: f64,
    shutter_s: f64,
    iso: f64,
}

fn positive(field: &'static str, value: f64) -> Result<f64, ExposureError> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(ExposureError::Domain { field, value })
    }
}

impl ExposureTuple {
    pub fn new(aperture_n: f64, shutter_s: f64, iso: f64) -> Result<Self, ExposureError> {
        Ok(ExposureTuple {
            aperture_n: positive("aperture", aperture_n)?,
            shutter_s: positive("shutter", shutter_s)?,
            iso: positive("iso", iso)?,
        })
    }

    pub fn aperture_n(&self) -> f64 {
        self.aperture_n
    }

    pub fn shutter_s(&self) -> f64 {
        self.shutter_s
    }

    pub fn iso(&self) -> f64 {
        self.iso
    }

    pub fn ev(&self) -> f64 {
        (self.aperture_n * self.aperture_n / self.shutter_s).log2() - (self.iso / 100.0).log2()
    }

    pub fn rounded_ev(&self) -> i64 {
        round_ev(self.ev())
    }
}

impl fmt::Display for ExposureTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(f/{}:{}:{})", self.aperture_n, format_shutter(self.shutter_s), self.iso)
    }
}

pub fn ev(t: &ExposureTuple) -> f64 {
    t.ev()
}

/// Nearest integer, ties away from zero.
pub fn round_ev(ev: f64) -> i64 {
    ev.round() as i64
}

/// `ev(b) − ev(a)`.
pub fn stops_between(a: &ExposureTuple, b: &ExposureTuple) -> f64 {
    b.ev() - a.ev()
}

/// Parses `"0.5"`, `"2"` or `"1/500"`. Fractions divide exactly as `n / d`.
pub fn parse_shutter(text: &str) -> Result<f64, ExposureError> {
    let text = text.trim();
    let syntax = || ExposureError::Syntax(text.to_string());
    let value = match text.split_once('/') {
        Some((num, den)) => {
            let num: f64 = num.trim().parse().map_err(|_| syntax())?;
            let den: f64 = den.trim().parse().map_err(|_| syntax())?;
            num / den
        }
        None => text.parse().map_err(|_| syntax())?,
    };
    positive("shutter", value)
}

/// Renders sub-second shutter times as `1/N` when N is integral.
pub fn format_shutter(seconds: f64) -> String {
    if seconds < 1.0 {
        let inv = 1.0 / seconds;
        if (inv - inv.round()).abs() < 1e-9 {
            return format!("1/{}", inv.round() as u64);
        }
    }
    format!("{seconds}")
}

/// The nine settings of the exposure sweep, from most under- to most
/// over-exposed. All share f/2 and ISO 100.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExposureLabel {
    Eeu,
    Eu3,
    Eu2,
    Eu1,
    Ex0,
    Eo1,
    Eo2,
    Eo3,
    Eeo,
}

impl ExposureLabel {
    pub const ALL: [ExposureLabel; 9] = [
        ExposureLabel::Eeu,
        ExposureLabel::Eu3,
        ExposureLabel::Eu2,
        ExposureLabel::Eu1,
        ExposureLabel::Ex0,
        ExposureLabel::Eo1,
        ExposureLabel::Eo2,
        ExposureLabel::Eo3,
        ExposureLabel::Eeo,
    ];

    pub const REFERENCE: ExposureLabel = ExposureLabel::Ex0;

    pub fn as_str(&self) -> &'static str {
        match self {
            ExposureLabel::Eeu => "EEU",
            ExposureLabel::Eu3 => "EU3",
            ExposureLabel::Eu2 => "EU2",
            ExposureLabel::Eu1 => "EU1",
            ExposureLabel::Ex0 => "EX0",
            ExposureLabel::Eo1 => "EO1",
            ExposureLabel::Eo2 => "EO2",
            ExposureLabel::Eo3 => "EO3",
            ExposureLabel::Eeo => "EEO",
        }
    }

    /// Shutter denominator N of the `1/N` second setting.
    fn shutter_denominator(&self) -> f64 {
        match self {
            ExposureLabel::Eeu => 500.0,
            ExposureLabel::Eu3 => 250.0,
            ExposureLabel::Eu2 => 125.0,
            ExposureLabel::Eu1 => 60.0,
            ExposureLabel::Ex0 => 30.0,
            ExposureLabel::Eo1 => 15.0,
            ExposureLabel::Eo2 => 8.0,
            ExposureLabel::Eo3 => 4.0,
            ExposureLabel::Eeo => 2.0,
        }
    }

    pub fn tuple(&self) -> ExposureTuple {
        ExposureTuple::new(2.0, 1.0 / self.shutter_denominator(), 100.0).expect("table values are positive")
    }

    pub fn ev(&self) -> f64 {
        self.tuple().ev()
    }

    /// Signed position in the sweep: −4 for EEU through +4 for EEO.
    /// Positive means more light than the reference.
    pub fn nominal_stop_offset(&self) -> i32 {
        (round_ev(ExposureLabel::REFERENCE.ev()) - round_ev(self.ev())) as i32
    }

    pub fn from_stop_offset(offset: i32) -> Option<ExposureLabel> {
        ExposureLabel::ALL.into_iter().find(|l| l.nominal_stop_offset() == offset)
    }

    /// The label mirrored around EX0 (EEU ↔ EEO, EU1 ↔ EO1, ...).
    pub fn mirror(&self) -> ExposureLabel {
        ExposureLabel::from_stop_offset(-self.nominal_stop_offset()).expect("sweep is symmetric")
    }
}

impl fmt::Display for ExposureLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ExposureLabel {
    type Err = ExposureError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ExposureLabel::ALL
            .into_iter()
            .find(|l| l.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| ExposureError::UnknownLabel(s.to_string()))
    }
}

/// Linear-light exposure change: `clamp(v · 2^stops, 0, 1)` per sample.
pub fn simulate_exposure(img: &Image, stop_offset: f64) -> Image {
    if stop_offset == 0.0 {
        return img.clone();
    }
    let gain = stop_offset.exp2();
    img.map_luma(|v| v * gain)
}
