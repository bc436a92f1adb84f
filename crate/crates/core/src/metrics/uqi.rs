use super::stats::{kahan_sum, window_stats, WindowStats};
use super::window::{map_windows, Kernel, Plane};
use super::{check_same_dims, MetricError, MetricId, MetricParams, MetricScore};
use crate::Image;

/// Global UQI over the whole image pair, with no stabilizing constants.
pub fn uqi_raw(x: &Image, y: &Image) -> Result<MetricScore, MetricError> {
    check_same_dims(x, y)?;
    let s = window_stats(x.luma(), y.luma())?;
    let luminance_den = s.mean_x * s.mean_x + s.mean_y * s.mean_y;
    let contrast_den = s.var_x + s.var_y;
    if luminance_den == 0.0 || contrast_den == 0.0 {
        return Err(MetricError::DegenerateReference("both luminance or both contrast terms vanish".into()));
    }
    // the correlation factor σxy / (σx σy) is 0/0 for a constant signal
    if s.var_x == 0.0 || s.var_y == 0.0 {
        return Err(MetricError::DegenerateReference("one signal is constant, correlation is undefined".into()));
    }
    let value = 4.0 * s.cov_xy * (s.mean_x * s.mean_y) / (contrast_den * luminance_den);
    Ok(MetricScore { metric: MetricId::UqiRaw, value, params: MetricParams::default(), n_windows: 1 })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UqiParams {
    pub window: usize,
    pub k1: f64,
    pub k2: f64,
}

impl Default for UqiParams {
    fn default() -> Self {
        UqiParams { window: 8, k1: 0.01, k2: 0.03 }
    }
}

impl UqiParams {
    pub fn c1(&self) -> f64 {
        self.k1 * self.k1
    }

    pub fn c2(&self) -> f64 {
        self.k2 * self.k2
    }
}

/// Stabilized luminance × contrast-structure index of one window.
///
/// Returns `None` when a denominator vanishes, which only happens with
/// zero stabilizing constants.
pub fn uqi_window_index(s: &WindowStats, c1: f64, c2: f64) -> Option<f64> {
    let mm = s.mean_x * s.mean_y;
    let lum_den = s.mean_x * s.mean_x + s.mean_y * s.mean_y + c1;
    let cs_den = s.var_x + s.var_y + c2;
    if lum_den == 0.0 || cs_den == 0.0 {
        return None;
    }
    Some(((2.0 * mm + c1) / lum_den) * ((2.0 * s.cov_xy + c2) / cs_den))
}

/// Mean stabilized UQI over all `window × window` positions.
pub fn uqi_stabilized(x: &Image, y: &Image, params: UqiParams) -> Result<MetricScore, MetricError> {
    check_same_dims(x, y)?;
    if params.window == 0 {
        return Err(MetricError::InvalidParams("window must be at least 1".into()));
    }
    if !(params.k1 >= 0.0 && params.k2 >= 0.0) {
        return Err(MetricError::InvalidParams("k1 and k2 must be non-negative".into()));
    }
    if x.width() < params.window || x.height() < params.window {
        return Err(MetricError::Shape(format!(
            "{}x{} image is smaller than the {w}x{w} window",
            x.width(),
            x.height(),
            w = params.window
        )));
    }
    let (c1, c2) = (params.c1(), params.c2());
    let values =
        map_windows(Plane::of(x), Plane::of(y), &Kernel::Uniform(params.window), |s| uqi_window_index(s, c1, c2));
    let n_windows = values.len();
    let values: Option<Vec<f64>> = values.into_iter().collect();
    let values =
        values.ok_or_else(|| MetricError::DegenerateReference("a window has vanishing denominators".into()))?;
    Ok(MetricScore {
        metric: MetricId::UqiStabilized,
        value: kahan_sum(values) / n_windows as f64,
        params: MetricParams { window: Some(params.window), k1: params.k1, k2: params.k2, ..MetricParams::default() },
        n_windows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn img(w: usize, h: usize, v: &[f64]) -> Image {
        Image::from_luma(w, h, v.to_vec()).unwrap()
    }

    #[test]
    fn raw_identity() {
        let x = img(2, 2, &[0.1, 0.9, 0.4, 0.3]);
        assert!((uqi_raw(&x, &x).unwrap().value - 1.0).abs() < 1e-15);
    }

    #[test]
    fn raw_hand_evaluated_pair() {
        let x = img(2, 2, &[0.0, 1.0, 0.0, 1.0]);
        let y = img(2, 2, &[0.0, 0.5, 0.0, 0.5]);
        // 4 (0.125)(0.5)(0.25) / ((0.25 + 0.0625)(0.25 + 0.0625))
        let expect = 0.0625 / (0.3125 * 0.3125);
        assert!((uqi_raw(&x, &y).unwrap().value - expect).abs() < 1e-15);
        assert!((expect - 0.64).abs() < 1e-12);
    }

    #[test]
    fn raw_black_reference_is_degenerate() {
        let x = img(2, 2, &[0.1, 0.9, 0.4, 0.3]);
        let black = Image::black(2, 2);
        assert!(matches!(uqi_raw(&x, &black), Err(MetricError::DegenerateReference(_))));
        assert!(matches!(uqi_raw(&black, &black), Err(MetricError::DegenerateReference(_))));
    }

    #[test]
    fn raw_shape_mismatch() {
        let a = Image::black(2, 2);
        let b = Image::black(3, 2);
        assert!(matches!(uqi_raw(&a, &b), Err(MetricError::Shape(_))));
    }

    #[test]
    fn stabilized_flat_against_black() {
        let black = Image::black(16, 16);
        let mid = Image::filled(16, 16, 0.5).unwrap();
        let dark = Image::filled(16, 16, 10.0 / 255.0).unwrap();
        let p = UqiParams::default();
        let mid_score = uqi_stabilized(&mid, &black, p).unwrap();
        let dark_score = uqi_stabilized(&dark, &black, p).unwrap();
        let c1 = 1e-4;
        assert!((mid_score.value - c1 / (0.25 + c1)).abs() < 1e-15);
        assert!((mid_score.value - 3.998e-4).abs() < 1e-7);
        assert!((dark_score.value - 6.11e-2).abs() < 1e-4);
        assert!(dark_score.value > mid_score.value);
        assert_eq!(mid_score.n_windows, 81);
    }

    #[test]
    fn stabilized_identity_on_constant() {
        let x = Image::filled(9, 9, 0.0).unwrap();
        assert_eq!(uqi_stabilized(&x, &x, UqiParams::default()).unwrap().value, 1.0);
    }

    #[test]
    fn stabilized_undersized() {
        let x = Image::black(7, 20);
        assert!(matches!(uqi_stabilized(&x, &x, UqiParams::default()), Err(MetricError::Shape(_))));
    }

    #[test]
    fn stabilized_zero_constants_on_black_is_degenerate() {
        let x = Image::black(8, 8);
        let p = UqiParams { k1: 0.0, k2: 0.0, ..Default::default() };
        assert!(uqi_stabilized(&x, &x, p).is_err());
    }
}
