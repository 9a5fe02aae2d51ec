//! Gaussian-smoothed trace formula for the density of states.
//!
//! With `F` the counting function, the density is
//! `D F'(E) [1 + 2 sum_k cos(2 pi k F(E))]`. Each harmonic is damped by
//! `exp(-(2 pi k sigma F')^2 / 2)`, the local-period form of a Gaussian
//! convolution of width `sigma`. A broadened stick spectrum built directly
//! from the levels serves as the reference.

use std::f64::consts::{PI, TAU};

use serde::Serialize;

use crate::catalog::CatalogEntry;
use crate::error::{Error, Result};

/// Stick references stop after this many levels, which only matters for a
/// grid reaching the accumulation point of an infinite bound spectrum.
pub const MAX_STICK_LEVELS: usize = 100_000;

/// Sampled density on a uniform grid; `total = smooth + oscillating`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityCurve {
    pub energies: Vec<f64>,
    pub smooth: Vec<f64>,
    pub oscillating: Vec<f64>,
    pub total: Vec<f64>,
    pub sigma: f64,
    pub k_max: usize,
}

impl DensityCurve {
    pub fn len(&self) -> usize {
        self.energies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.energies.is_empty()
    }

    /// Largest `|total|` difference against another curve on the same grid.
    pub fn sup_distance(&self, other: &DensityCurve) -> f64 {
        self.total
            .iter()
            .zip(&other.total)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Trapezoid integral of `total` over `[energies[0], upper]`.
    pub fn integral_to(&self, upper: f64) -> f64 {
        let mut acc = 0.0;
        for i in 1..self.len() {
            let (x0, x1) = (self.energies[i - 1], self.energies[i]);
            if x0 >= upper {
                break;
            }
            let (y0, y1) = (self.total[i - 1], self.total[i]);
            if x1 <= upper {
                acc += 0.5 * (x1 - x0) * (y0 + y1);
            } else {
                let t = (upper - x0) / (x1 - x0);
                let y = y0 + t * (y1 - y0);
                acc += 0.5 * (upper - x0) * (y0 + y);
            }
        }
        acc
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct PeakList {
    pub energies: Vec<f64>,
    pub heights: Vec<f64>,
}

impl PeakList {
    pub fn len(&self) -> usize {
        self.energies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.energies.is_empty()
    }
}

/// `samples` equally spaced points covering `[e_min, e_max]`.
pub fn uniform_grid(e_min: f64, e_max: f64, samples: usize) -> Vec<f64> {
    let step = (e_max - e_min) / (samples - 1) as f64;
    (0..samples)
        .map(|i| {
            if i + 1 == samples {
                e_max
            } else {
                e_min + i as f64 * step
            }
        })
        .collect()
}

/// `sum_{k=1..k_max} cos(2 pi k phase) exp(-(rate k)^2 / 2)`.
///
/// Harmonics come from repeated rotation and the Gaussian weights from a
/// ratio recurrence, so each term costs a handful of multiplications; the
/// accumulated rounding stays near `k_max * eps`.
fn damped_sum(phase: f64, rate: f64, k_max: usize) -> f64 {
    let (sin, cos) = (TAU * phase.fract()).sin_cos();
    let r2 = rate * rate;
    let (mut re, mut im) = (cos, sin);
    let mut weight = (-0.5 * r2).exp();
    let mut ratio = (-1.5 * r2).exp();
    let step = (-r2).exp();
    let mut acc = 0.0;
    for _ in 0..k_max {
        if weight < f64::MIN_POSITIVE {
            // weights only decrease, so the rest of the sum is below
            // k_max * 2e-308; stopping here also avoids slow subnormal math
            break;
        }
        acc += re * weight;
        (re, im) = (re * cos - im * sin, re * sin + im * cos);
        weight *= ratio;
        ratio *= step;
    }
    acc
}

pub fn density_curve(
    entry: &CatalogEntry,
    e_min: f64,
    e_max: f64,
    samples: usize,
    sigma: f64,
    k_max: usize,
) -> Result<DensityCurve> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::Configuration(format!(
            "sigma must be positive, got {sigma}"
        )));
    }
    if k_max == 0 {
        return Err(Error::Configuration("k_max must be at least 1".into()));
    }
    if !(e_min >= 0.0 && e_min < e_max && e_max.is_finite()) {
        return Err(Error::Configuration(format!(
            "energy window [{e_min}, {e_max}] must satisfy 0 <= E_min < E_max"
        )));
    }
    if samples < 2 {
        return Err(Error::Configuration("at least two samples required".into()));
    }
    let spacing = (e_max - e_min) / (samples - 1) as f64;
    if spacing > sigma / 5.0 * (1.0 + 1e-12) {
        return Err(Error::Configuration(format!(
            "grid spacing {spacing} exceeds sigma/5 = {}; use at least {} samples",
            sigma / 5.0,
            ((e_max - e_min) / (sigma / 5.0)).ceil() as usize + 1
        )));
    }
    // both ends inside the bound range
    entry.counting_value(e_min)?;
    entry.counting_value(e_max)?;

    let energies = uniform_grid(e_min, e_max, samples);
    let d = entry.degeneracy(0);
    let sample = |e: f64| -> Result<(f64, f64)> {
        let f = entry.counting_value(e)?;
        let fp = entry.counting_derivative(e)?;
        let s = d * fp;
        Ok((s, 2.0 * s * damped_sum(f, TAU * sigma * fp, k_max)))
    };
    // samples are independent and each keeps a fixed summation order, so the
    // split across threads does not change a single bit
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get());
    let chunk = samples.div_ceil(workers).max(256);
    let parts: Vec<Result<Vec<(f64, f64)>>> = std::thread::scope(|scope| {
        let handles: Vec<_> = energies
            .chunks(chunk)
            .map(|block| scope.spawn(move || block.iter().map(|&e| sample(e)).collect()))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("density worker panicked"))
            .collect()
    });
    let mut smooth = Vec::with_capacity(samples);
    let mut oscillating = Vec::with_capacity(samples);
    let mut total = Vec::with_capacity(samples);
    for part in parts {
        for (s, o) in part? {
            smooth.push(s);
            oscillating.push(o);
            total.push(s + o);
        }
    }
    Ok(DensityCurve {
        energies,
        smooth,
        oscillating,
        total,
        sigma,
        k_max,
    })
}

/// Sum of unit-area Gaussians of width `sigma` centred on the levels.
pub fn broadened_stick_density(
    entry: &CatalogEntry,
    energies: &[f64],
    sigma: f64,
) -> Result<DensityCurve> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::Configuration(format!(
            "sigma must be positive, got {sigma}"
        )));
    }
    if energies.is_empty() || energies.iter().any(|e| !e.is_finite()) {
        return Err(Error::Configuration(
            "energy grid must be finite and non-empty".into(),
        ));
    }
    if energies.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Configuration(
            "energy grid must be strictly ascending".into(),
        ));
    }
    let lo = energies[0] - 8.0 * sigma;
    let hi = energies[energies.len() - 1] + 8.0 * sigma;
    let count = entry.bound_state_count().unwrap_or(usize::MAX);
    let mut sticks = Vec::new();
    for n in 0..count.min(MAX_STICK_LEVELS) {
        let level = entry.spectrum_level(n)?;
        if level > hi {
            break;
        }
        if level >= lo {
            sticks.push((level, entry.degeneracy(n)));
        }
    }
    let norm = 1.0 / (sigma * (2.0 * PI).sqrt());
    let total: Vec<f64> = energies
        .iter()
        .map(|&e| {
            sticks
                .iter()
                .map(|&(level, d)| {
                    let z = (e - level) / sigma;
                    d * norm * (-0.5 * z * z).exp()
                })
                .sum()
        })
        .collect();
    Ok(DensityCurve {
        energies: energies.to_vec(),
        smooth: total.clone(),
        oscillating: vec![0.0; energies.len()],
        total,
        sigma,
        k_max: 0,
    })
}

/// Parabola through `(-1, y0), (0, y1), (1, y2)`: the abscissa of its
/// vertex clamped to `[lo, hi]`, and its value there.
fn parabola_peak(y0: f64, y1: f64, y2: f64, lo: f64, hi: f64) -> (f64, f64) {
    let slope = 0.5 * (y2 - y0);
    let curvature = y0 - 2.0 * y1 + y2;
    let t = if curvature < 0.0 {
        (-slope / curvature).clamp(lo, hi)
    } else {
        0.0f64.clamp(lo, hi)
    };
    (t, y1 + slope * t + 0.5 * curvature * t * t)
}

/// Local maxima of `total` above `min_height`, refined by quadratic
/// interpolation.
///
/// A grid end that exceeds its neighbour counts as a peak (the curve is cut
/// mid-peak there), except at `E <= 0`, the floor of the spectrum, where the
/// ground level contributes only half a Gaussian.
pub fn extract_peaks(curve: &DensityCurve, min_height: f64) -> PeakList {
    let y = &curve.total;
    let x = &curve.energies;
    let n = y.len();
    let mut peaks = PeakList::default();
    if n < 3 {
        return peaks;
    }
    let step = x[1] - x[0];
    let mut push = |at: f64, height: f64| {
        if height > min_height && height > 0.0 {
            peaks.energies.push(at);
            peaks.heights.push(height);
        }
    };

    if x[0] > 0.0 && y[0] > y[1] {
        // samples 0..2 centred on 1, vertex kept within a step of the edge
        let (t, h) = parabola_peak(y[0], y[1], y[2], -2.0, 0.0);
        push(x[1] + t * step, h.max(y[0]));
    }
    for i in 1..n - 1 {
        if y[i] > y[i - 1] && y[i] >= y[i + 1] {
            let (t, h) = parabola_peak(y[i - 1], y[i], y[i + 1], -1.0, 1.0);
            push(x[i] + t * step, h);
        }
    }
    if y[n - 1] > y[n - 2] {
        let (t, h) = parabola_peak(y[n - 3], y[n - 2], y[n - 1], 0.0, 2.0);
        push(x[n - 2] + t * step, h.max(y[n - 1]));
    }
    peaks
}
