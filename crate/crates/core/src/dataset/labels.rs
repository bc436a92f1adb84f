//! Experimental dimensions and their fixed geometry.

use std::fmt;
use std::str::FromStr;

/// Unrecognized label text.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown {kind} label {text:?}")]
pub struct LabelError {
    pub kind: &'static str,
    pub text: String,
}

macro_rules! label_enum {
    ($(#[$meta:meta])* $name:ident, $kind:literal { $($variant:ident => $text:literal),+ $(,)? }) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum $name {
            $($variant),+
        }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn as_str(&self) -> &'static str {
                match self {
                    $($name::$variant => $text),+
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl FromStr for $name {
            type Err = LabelError;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                $name::ALL
                    .iter()
                    .copied()
                    .find(|v| v.as_str().eq_ignore_ascii_case(s))
                    .ok_or_else(|| LabelError { kind: $kind, text: s.to_string() })
            }
        }
    };
}

label_enum!(
    /// Fixed camera mounting; only the straight-on reference exists.
    CameraPosition, "camera position" { Cp0 => "CP0" }
);

label_enum!(Camera, "camera" { Lq => "LQ", Hq => "HQ" });

label_enum!(
    Background, "background" {
        Bg0 => "BG0",
        Bg1 => "BG1",
        Bg2 => "BG2",
        Bg3 => "BG3",
        Bg4 => "BG4",
    }
);

label_enum!(Lamp, "lamp" { Lamp0 => "LAMP0", Lamp1 => "LAMP1", Lamp2 => "LAMP2" });

label_enum!(Intensity, "light intensity" { Lil => "LIL", Lih => "LIH", Li0 => "LI0" });

label_enum!(
    LightAngle, "light angle" {
        La0 => "LA0",
        La1 => "LA1",
        La2 => "LA2",
        La3 => "LA3",
        La4 => "LA4",
    }
);

label_enum!(
    LightPosition, "light position" {
        Lp0 => "LP0",
        Lp1 => "LP1",
        Lp2 => "LP2",
        Lp3 => "LP3",
        Lp4 => "LP4",
        Lp5 => "LP5",
        Lp6 => "LP6",
        Lp7 => "LP7",
        Lp8 => "LP8",
    }
);

/// Red and blue white-balance gains.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WbGains {
    pub red: f64,
    pub blue: f64,
}

impl Camera {
    pub fn model(&self) -> &'static str {
        match self {
            Camera::Lq => "Raspberry Pi V2.0",
            Camera::Hq => "Raspberry Pi High Quality",
        }
    }

    /// Fixed gains applied with auto white balance disabled.
    pub fn white_balance(&self) -> WbGains {
        match self {
            Camera::Lq => WbGains { red: 1.4883, blue: 1.2539 },
            Camera::Hq => WbGains { red: 3.1484, blue: 1.5781 },
        }
    }

    /// Capture size as (width, height).
    pub fn image_size(&self) -> (usize, usize) {
        (640, 480)
    }
}

impl Background {
    pub fn description(&self) -> &'static str {
        match self {
            Background::Bg0 => "Black velvet",
            Background::Bg1 => "Moussu",
            Background::Bg2 => "Black 3.0",
            Background::Bg3 => "Leitz 227231",
            Background::Bg4 => "Neewer background",
        }
    }

    pub fn material(&self) -> &'static str {
        match self {
            Background::Bg0 | Background::Bg4 => "Fabric",
            Background::Bg1 | Background::Bg2 => "Paint",
            Background::Bg3 => "Paper",
        }
    }
}

impl Lamp {
    pub fn modifier(&self) -> &'static str {
        match self {
            Lamp::Lamp0 => "collimator",
            Lamp::Lamp1 => "reflector",
            Lamp::Lamp2 => "bare",
        }
    }
}

impl Intensity {
    /// Percentage of the source's full output.
    pub fn percent(&self, lamp: Lamp) -> f64 {
        match self {
            Intensity::Lil => 10.0,
            Intensity::Lih => 100.0,
            Intensity::Li0 => match lamp {
                Lamp::Lamp0 => 75.0,
                Lamp::Lamp1 => 25.0,
                Lamp::Lamp2 => 30.0,
            },
        }
    }
}

impl LightAngle {
    /// Incidence angle in degrees relative to the background plane.
    pub fn degrees(&self) -> f64 {
        match self {
            LightAngle::La0 => 90.0,
            LightAngle::La1 => 70.0,
            LightAngle::La2 => 50.0,
            LightAngle::La3 => 30.0,
            LightAngle::La4 => 10.0,
        }
    }
}

/// Vertical placement of a lighting position: above the camera, at the
/// origin directly over the object, or under it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LightHeight {
    Above,
    Over,
    Under,
}

impl LightPosition {
    /// Horizontal angle in degrees; `None` for the top and under positions.
    pub fn degrees(&self) -> Option<f64> {
        match self {
            LightPosition::Lp0 => Some(30.0),
            LightPosition::Lp1 => Some(45.0),
            LightPosition::Lp2 => Some(90.0),
            LightPosition::Lp3 => Some(150.0),
            LightPosition::Lp4 => Some(180.0),
            LightPosition::Lp5 => Some(330.0),
            LightPosition::Lp6 => Some(360.0),
            LightPosition::Lp7 | LightPosition::Lp8 => None,
        }
    }

    pub fn height(&self) -> LightHeight {
        match self {
            LightPosition::Lp7 => LightHeight::Over,
            LightPosition::Lp8 => LightHeight::Under,
            _ => LightHeight::Above,
        }
    }

    pub fn description(&self) -> &'static str {
        match self {
            LightPosition::Lp0 => "Loop",
            LightPosition::Lp1 => "Rembrandt",
            LightPosition::Lp2 => "Side",
            LightPosition::Lp3 => "Rim",
            LightPosition::Lp4 => "Back",
            LightPosition::Lp5 => "Broad",
            LightPosition::Lp6 => "Front",
            LightPosition::Lp7 => "Top",
            LightPosition::Lp8 => "Under",
        }
    }
}

/// Nominal distances of the lab layout, in centimetres. Informational only.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Geometry {
    pub camera_to_object_cm: Option<f64>,
    pub object_to_background_cm: Option<f64>,
    pub camera_to_background_cm: Option<f64>,
}

impl Geometry {
    pub const REFERENCE: Geometry = Geometry {
        camera_to_object_cm: Some(140.0),
        object_to_background_cm: Some(56.0),
        camera_to_background_cm: Some(196.0),
    };
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometry_constants() {
        let angles: Vec<f64> = LightAngle::ALL.iter().map(|a| a.degrees()).collect();
        assert_eq!(angles, vec![90.0, 70.0, 50.0, 30.0, 10.0]);
        let positions: Vec<Option<f64>> = LightPosition::ALL.iter().map(|p| p.degrees()).collect();
        assert_eq!(
            positions,
            vec![Some(30.0), Some(45.0), Some(90.0), Some(150.0), Some(180.0), Some(330.0), Some(360.0), None, None]
        );
        assert_eq!(LightPosition::Lp1.description(), "Rembrandt");
    }

    #[test]
    fn reference_intensities() {
        let pct: Vec<f64> = Lamp::ALL.iter().map(|&l| Intensity::Li0.percent(l)).collect();
        assert_eq!(pct, vec![75.0, 25.0, 30.0]);
        assert_eq!(Intensity::Lil.percent(Lamp::Lamp2), 10.0);
        assert_eq!(Intensity::Lih.percent(Lamp::Lamp0), 100.0);
    }

    #[test]
    fn labels_parse_case_insensitively() {
        assert_eq!("lamp1".parse::<Lamp>().unwrap(), Lamp::Lamp1);
        assert_eq!("HQ".parse::<Camera>().unwrap(), Camera::Hq);
        let err = "BG9".parse::<Background>().unwrap_err();
        assert_eq!(err.kind, "background");
    }

    #[test]
    fn white_balance_table() {
        assert_eq!(Camera::Lq.white_balance(), WbGains { red: 1.4883, blue: 1.2539 });
        assert_eq!(Camera::Hq.white_balance(), WbGains { red: 3.1484, blue: 1.5781 });
    }
}
