use rayon::prelude::*;

use super::stats::{weighted_window_stats, window_stats, WindowStats};

/// Borrowed row-major sample grid.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Plane<'a> {
    pub width: usize,
    pub height: usize,
    pub data: &'a [f64],
}

impl<'a> Plane<'a> {
    pub fn of(img: &'a crate::Image) -> Self {
        Plane { width: img.width(), height: img.height(), data: img.luma() }
    }
}

/// Square sliding window, stride 1, valid positions only.
#[derive(Debug, Clone)]
pub(crate) enum Kernel {
    Uniform(usize),
    Weighted { size: usize, weights: Vec<f64> },
}

impl Kernel {
    pub fn size(&self) -> usize {
        match self {
            Kernel::Uniform(n) => *n,
            Kernel::Weighted { size, .. } => *size,
        }
    }

    /// Normalized `size × size` Gaussian with standard deviation `sigma`.
    pub fn gaussian(size: usize, sigma: f64) -> Self {
        let c = (size as f64 - 1.0) / 2.0;
        let g: Vec<f64> = (0..size)
            .map(|i| {
                let d = i as f64 - c;
                (-(d * d) / (2.0 * sigma * sigma)).exp()
            })
            .collect();
        let mut weights = Vec::with_capacity(size * size);
        for gy in &g {
            for gx in &g {
                weights.push(gy * gx);
            }
        }
        let total = super::stats::kahan_sum(weights.iter().copied());
        weights.iter_mut().for_each(|w| *w /= total);
        Kernel::Weighted { size, weights }
    }
}

/// Evaluates `f` on the statistics of every valid window, returning the
/// per-window values in row-major window order.
pub(crate) fn map_windows<T, F>(x: Plane<'_>, y: Plane<'_>, kernel: &Kernel, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&WindowStats) -> T + Sync,
{
    let n = kernel.size();
    debug_assert!(x.width == y.width && x.height == y.height);
    debug_assert!(x.width >= n && x.height >= n);
    let cols = x.width - n + 1;
    let rows = x.height - n + 1;
    let per_row: Vec<Vec<T>> = (0..rows)
        .into_par_iter()
        .map(|wy| {
            let mut bx = vec![0.0; n * n];
            let mut by = vec![0.0; n * n];
            let mut out = Vec::with_capacity(cols);
            for wx in 0..cols {
                for dy in 0..n {
                    let src = (wy + dy) * x.width + wx;
                    bx[dy * n..(dy + 1) * n].copy_from_slice(&x.data[src..src + n]);
                    by[dy * n..(dy + 1) * n].copy_from_slice(&y.data[src..src + n]);
                }
                let stats = match kernel {
                    Kernel::Uniform(_) => window_stats(&bx, &by).expect("non-empty window"),
                    Kernel::Weighted { weights, .. } => weighted_window_stats(&bx, &by, weights),
                };
                out.push(f(&stats));
            }
            out
        })
        .collect();
    per_row.into_iter().flatten().collect()
}
