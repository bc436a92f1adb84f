#![allow(dead_code)]

use spacelab_iqa::fixtures::hash_unit;
use spacelab_iqa::Image;

/// Uniform noise in `[lo, hi)`, reproducible from `seed`.
pub fn noise(seed: u64, width: usize, height: usize, lo: f64, hi: f64) -> Image {
    let data = (0..width * height).map(|i| lo + (hi - lo) * hash_unit(seed, i as u64)).collect();
    Image::from_luma(width, height, data).unwrap()
}

/// Textbook UQI over the whole image with naive sums.
pub fn direct_uqi(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let vx = x.iter().map(|a| (a - mx) * (a - mx)).sum::<f64>() / n;
    let vy = y.iter().map(|b| (b - my) * (b - my)).sum::<f64>() / n;
    let cov = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum::<f64>() / n;
    4.0 * cov * mx * my / ((vx + vy) * (mx * mx + my * my))
}

/// One stabilized window evaluated directly from its samples.
pub fn direct_stabilized(x: &[f64], y: &[f64], c1: f64, c2: f64) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let vx = x.iter().map(|a| (a - mx) * (a - mx)).sum::<f64>() / n;
    let vy = y.iter().map(|b| (b - my) * (b - my)).sum::<f64>() / n;
    let cov = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum::<f64>() / n;
    (2.0 * mx * my + c1) * (2.0 * cov + c2) / ((mx * mx + my * my + c1) * (vx + vy + c2))
}

/// True when values rise to the maximum and then fall, never reversing.
pub fn unimodal(values: &[f64]) -> bool {
    let peak = values.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).map(|(i, _)| i).unwrap_or(0);
    values[..=peak].windows(2).all(|w| w[0] <= w[1]) && values[peak..].windows(2).all(|w| w[0] >= w[1])
}
