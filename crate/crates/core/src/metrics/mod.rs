//! Full-reference quality metrics on luma.
//!
//! Four scores are provided:
//!
//! * [`uqi_raw`]: the global Universal Image Quality Index,
//!   `4 σxy x̄ ȳ / ((σx² + σy²)(x̄² + ȳ²))`, evaluated once over the whole
//!   image. It is undefined whenever either signal is constant, which
//!   includes the all-black reference, and reports
//!   [`MetricError::DegenerateReference`] in that case.
//! * [`uqi_stabilized`]: the same three-factor index evaluated on sliding
//!   uniform windows with additive constants `C1 = k1²`, `C2 = k2²`
//!   (dynamic range `L = 1`) and averaged over windows. This is the score
//!   used for background featurelessness.
//! * [`ssim`]: single-scale SSIM with an 11×11 Gaussian window, σ = 1.5.
//! * [`ms_ssim`]: multi-scale SSIM over dyadic 2×2-mean pyramids.
//!
//! All statistics are population moments with compensated summation, and
//! every window is reduced independently, so results do not depend on the
//! number of worker threads.

mod ssim;
pub mod stats;
mod uqi;
mod window;

use thiserror::Error;

pub use ssim::{ms_ssim, ms_ssim_with, ssim, ssim_with, SsimParams, MS_SSIM_WEIGHTS};
pub use stats::{kahan_sum, window_stats, KahanSum, WindowStats};
pub use uqi::{uqi_raw, uqi_stabilized, uqi_window_index, UqiParams};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricError {
    #[error("empty input window")]
    EmptyInput,
    #[error("shape error: {0}")]
    Shape(String),
    #[error("degenerate reference: {0}")]
    DegenerateReference(String),
    #[error("invalid metric parameters: {0}")]
    InvalidParams(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MetricId {
    UqiRaw,
    UqiStabilized,
    Ssim,
    MsSsim,
}

impl MetricId {
    pub fn as_str(&self) -> &'static str {
        match self {
            MetricId::UqiRaw => "UQI_RAW",
            MetricId::UqiStabilized => "UQI_STABILIZED",
            MetricId::Ssim => "SSIM",
            MetricId::MsSsim => "MS_SSIM",
        }
    }
}

impl std::fmt::Display for MetricId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Parameters a score was computed with.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct MetricParams {
    /// Side of the square window; `None` for global scores.
    pub window: Option<usize>,
    pub gaussian_sigma: Option<f64>,
    pub k1: f64,
    pub k2: f64,
    pub scales: Option<usize>,
    pub weights: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricScore {
    pub metric: MetricId,
    pub value: f64,
    pub params: MetricParams,
    /// Number of windows reduced into `value`, summed over scales.
    pub n_windows: usize,
}

pub(crate) fn check_same_dims(x: &crate::Image, y: &crate::Image) -> Result<(), MetricError> {
    if x.dims() != y.dims() {
        return Err(MetricError::Shape(format!(
            "dimension mismatch: {}x{} vs {}x{}",
            x.width(),
            x.height(),
            y.width(),
            y.height()
        )));
    }
    Ok(())
}
