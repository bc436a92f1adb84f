//! Population moments over paired sample windows.

use super::MetricError;

/// Compensated running sum; summation order is the iteration order.
#[derive(Debug, Default, Clone, Copy)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, v: f64) {
        let y = v - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn total(&self) -> f64 {
        self.sum
    }
}

pub fn kahan_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut acc = KahanSum::new();
    for v in values {
        acc.add(v);
    }
    acc.total()
}

/// Means, variances and covariance of two equally sized windows.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowStats {
    pub mean_x: f64,
    pub mean_y: f64,
    pub var_x: f64,
    pub var_y: f64,
    pub cov_xy: f64,
}

impl WindowStats {
    /// Swaps the roles of the two signals.
    pub fn swapped(&self) -> Self {
        WindowStats {
            mean_x: self.mean_y,
            mean_y: self.mean_x,
            var_x: self.var_y,
            var_y: self.var_x,
            cov_xy: self.cov_xy,
        }
    }
}

/// Two-pass population statistics (divide by `n`).
pub fn window_stats(x: &[f64], y: &[f64]) -> Result<WindowStats, MetricError> {
    if x.is_empty() || y.is_empty() {
        return Err(MetricError::EmptyInput);
    }
    if x.len() != y.len() {
        return Err(MetricError::Shape(format!("window lengths differ: {} vs {}", x.len(), y.len())));
    }
    let n = x.len() as f64;
    let mean_x = kahan_sum(x.iter().copied()) / n;
    let mean_y = kahan_sum(y.iter().copied()) / n;
    let mut vx = KahanSum::new();
    let mut vy = KahanSum::new();
    let mut cxy = KahanSum::new();
    for (&a, &b) in x.iter().zip(y) {
        let dx = a - mean_x;
        let dy = b - mean_y;
        vx.add(dx * dx);
        vy.add(dy * dy);
        cxy.add(dx * dy);
    }
    Ok(WindowStats { mean_x, mean_y, var_x: vx.total() / n, var_y: vy.total() / n, cov_xy: cxy.total() / n })
}

/// Weighted two-pass statistics; `weights` must sum to one. Windows are
/// small, so plain accumulation is exact to a few ulps.
pub(crate) fn weighted_window_stats(x: &[f64], y: &[f64], weights: &[f64]) -> WindowStats {
    debug_assert!(x.len() == y.len() && x.len() == weights.len());
    let (mut mean_x, mut mean_y) = (0.0, 0.0);
    for ((&a, &b), &w) in x.iter().zip(y).zip(weights) {
        mean_x += w * a;
        mean_y += w * b;
    }
    let (mut var_x, mut var_y, mut cov_xy) = (0.0, 0.0, 0.0);
    for ((&a, &b), &w) in x.iter().zip(y).zip(weights) {
        let dx = a - mean_x;
        let dy = b - mean_y;
        var_x += w * dx * dx;
        var_y += w * dy * dy;
        cov_xy += w * dx * dy;
    }
    WindowStats { mean_x, mean_y, var_x, var_y, cov_xy }
}
