use super::stats::{kahan_sum, WindowStats};
use super::window::{map_windows, Kernel, Plane};
use super::{check_same_dims, MetricError, MetricId, MetricParams, MetricScore};
use crate::Image;

/// Per-scale exponents for five-scale MS-SSIM, finest first.
pub const MS_SSIM_WEIGHTS: [f64; 5] = [0.0448, 0.2856, 0.3001, 0.2363, 0.1333];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SsimParams {
    pub window: usize,
    pub sigma: f64,
    pub k1: f64,
    pub k2: f64,
}

impl Default for SsimParams {
    fn default() -> Self {
        SsimParams { window: 11, sigma: 1.5, k1: 0.01, k2: 0.03 }
    }
}

impl SsimParams {
    fn validate(&self) -> Result<(), MetricError> {
        if self.window == 0 || [self.sigma, self.k1, self.k2].iter().any(|v| v.is_nan() || *v <= 0.0) {
            return Err(MetricError::InvalidParams(format!("{self:?}")));
        }
        Ok(())
    }

    fn metric_params(&self) -> MetricParams {
        MetricParams {
            window: Some(self.window),
            gaussian_sigma: Some(self.sigma),
            k1: self.k1,
            k2: self.k2,
            ..MetricParams::default()
        }
    }
}

/// Luminance and contrast-structure factors of one window.
fn factors(s: &WindowStats, c1: f64, c2: f64) -> (f64, f64) {
    let l = (2.0 * (s.mean_x * s.mean_y) + c1) / (s.mean_x * s.mean_x + s.mean_y * s.mean_y + c1);
    let cs = (2.0 * s.cov_xy + c2) / (s.var_x + s.var_y + c2);
    (l, cs)
}

struct ScaleResult {
    mean_ssim: f64,
    mean_cs: f64,
    n_windows: usize,
}

fn single_scale(x: Plane<'_>, y: Plane<'_>, kernel: &Kernel, p: &SsimParams) -> ScaleResult {
    let (c1, c2) = (p.k1 * p.k1, p.k2 * p.k2);
    let pairs = map_windows(x, y, kernel, |s| factors(s, c1, c2));
    let n = pairs.len() as f64;
    ScaleResult {
        mean_ssim: kahan_sum(pairs.iter().map(|(l, cs)| l * cs)) / n,
        mean_cs: kahan_sum(pairs.iter().map(|(_, cs)| *cs)) / n,
        n_windows: pairs.len(),
    }
}

fn check_min_size(x: &Image, min: usize, what: &str) -> Result<(), MetricError> {
    if x.width() < min || x.height() < min {
        return Err(MetricError::Shape(format!(
            "{what} requires at least {min}x{min} pixels, got {}x{}",
            x.width(),
            x.height()
        )));
    }
    Ok(())
}

pub fn ssim(x: &Image, y: &Image) -> Result<MetricScore, MetricError> {
    ssim_with(x, y, SsimParams::default())
}

/// Mean SSIM over all valid Gaussian-window positions.
pub fn ssim_with(x: &Image, y: &Image, p: SsimParams) -> Result<MetricScore, MetricError> {
    p.validate()?;
    check_same_dims(x, y)?;
    check_min_size(x, p.window, "SSIM")?;
    let kernel = Kernel::gaussian(p.window, p.sigma);
    let r = single_scale(Plane::of(x), Plane::of(y), &kernel, &p);
    Ok(MetricScore { metric: MetricId::Ssim, value: r.mean_ssim, params: p.metric_params(), n_windows: r.n_windows })
}

/// 2×2 box average followed by decimation; odd trailing rows/columns drop.
fn downsample(width: usize, height: usize, data: &[f64]) -> (usize, usize, Vec<f64>) {
    let (w2, h2) = (width / 2, height / 2);
    let mut out = Vec::with_capacity(w2 * h2);
    for y in 0..h2 {
        let r0 = &data[2 * y * width..];
        let r1 = &data[(2 * y + 1) * width..];
        for x in 0..w2 {
            out.push((r0[2 * x] + r0[2 * x + 1] + r1[2 * x] + r1[2 * x + 1]) / 4.0);
        }
    }
    (w2, h2, out)
}

/// MS-SSIM with the standard exponents. Fewer than five scales use the
/// leading exponents renormalized to sum to one.
pub fn ms_ssim(x: &Image, y: &Image, scales: usize) -> Result<MetricScore, MetricError> {
    if scales == 0 || scales > MS_SSIM_WEIGHTS.len() {
        return Err(MetricError::InvalidParams(format!(
            "scales must be in 1..={}, got {scales}",
            MS_SSIM_WEIGHTS.len()
        )));
    }
    let weights: Vec<f64> = if scales == MS_SSIM_WEIGHTS.len() {
        MS_SSIM_WEIGHTS.to_vec()
    } else {
        let head = &MS_SSIM_WEIGHTS[..scales];
        let total: f64 = head.iter().sum();
        head.iter().map(|w| w / total).collect()
    };
    ms_ssim_with(x, y, SsimParams::default(), &weights)
}

/// MS-SSIM with explicit per-scale exponents (finest first).
///
/// Contrast-structure means at every scale but the coarsest, and the full
/// SSIM mean at the coarsest, are clamped at zero before exponentiation.
pub fn ms_ssim_with(x: &Image, y: &Image, p: SsimParams, weights: &[f64]) -> Result<MetricScore, MetricError> {
    p.validate()?;
    if weights.is_empty() || weights.iter().any(|w| w.is_nan() || *w < 0.0) {
        return Err(MetricError::InvalidParams("weights must be non-negative".into()));
    }
    check_same_dims(x, y)?;
    let scales = weights.len();
    let min = p.window << (scales - 1);
    check_min_size(x, min, &format!("{scales}-scale MS-SSIM"))?;

    let kernel = Kernel::gaussian(p.window, p.sigma);
    let (mut w, mut h) = x.dims();
    let mut xs = x.luma().to_vec();
    let mut ys = y.luma().to_vec();
    let mut value = 1.0;
    let mut n_windows = 0;
    for (scale, &weight) in weights.iter().enumerate() {
        let r = single_scale(
            Plane { width: w, height: h, data: &xs },
            Plane { width: w, height: h, data: &ys },
            &kernel,
            &p,
        );
        n_windows += r.n_windows;
        let base = if scale + 1 == scales { r.mean_ssim } else { r.mean_cs };
        value *= base.max(0.0).powf(weight);
        if scale + 1 < scales {
            let (nw, nh, nx) = downsample(w, h, &xs);
            let (_, _, ny) = downsample(w, h, &ys);
            (w, h, xs, ys) = (nw, nh, nx, ny);
        }
    }
    Ok(MetricScore {
        metric: MetricId::MsSsim,
        value,
        params: MetricParams { scales: Some(scales), weights: weights.to_vec(), ..p.metric_params() },
        n_windows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn checker(n: usize, cell: usize) -> Image {
        let v =
            (0..n * n).map(|i| if ((i % n) / cell + (i / n) / cell).is_multiple_of(2) { 0.0 } else { 1.0 }).collect();
        Image::from_luma(n, n, v).unwrap()
    }

    #[test]
    fn gaussian_kernel_is_normalized_and_symmetric() {
        let Kernel::Weighted { weights, size } = Kernel::gaussian(11, 1.5) else { unreachable!() };
        assert_eq!(size, 11);
        assert!((weights.iter().sum::<f64>() - 1.0).abs() < 1e-14);
        assert_eq!(weights[0], weights[120]);
        assert_eq!(weights[5 * 11 + 5], weights.iter().cloned().fold(0.0, f64::max));
    }

    #[test]
    fn ssim_identity_and_inversion() {
        let x = checker(32, 4);
        assert_eq!(ssim(&x, &x).unwrap().value, 1.0);
        let inv = x.map_luma(|v| 1.0 - v);
        assert!(ssim(&x, &inv).unwrap().value < 0.0);
    }

    #[test]
    fn ssim_undersized() {
        let x = Image::black(10, 30);
        assert!(matches!(ssim(&x, &x), Err(MetricError::Shape(_))));
    }

    #[test]
    fn downsample_averages_blocks() {
        let (w, h, d) = downsample(3, 2, &[0.0, 1.0, 0.5, 1.0, 1.0, 0.5]);
        assert_eq!((w, h), (1, 1));
        assert_eq!(d, vec![0.75]);
    }

    #[test]
    fn ms_ssim_reports_required_minimum() {
        let x = Image::black(175, 200);
        let err = ms_ssim(&x, &x, 5).unwrap_err();
        assert!(err.to_string().contains("176x176"), "{err}");
        assert!(ms_ssim(&x, &x, 0).is_err());
        assert!(ms_ssim(&x, &x, 6).is_err());
    }

    #[test]
    fn ms_ssim_identity_on_constant() {
        let x = Image::filled(176, 176, 0.3).unwrap();
        let s = ms_ssim(&x, &x, 5).unwrap();
        assert_eq!(s.value, 1.0);
        assert_eq!(s.params.weights, MS_SSIM_WEIGHTS.to_vec());
    }
}
