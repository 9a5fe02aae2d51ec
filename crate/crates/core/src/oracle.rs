//! Finite-difference eigenvalues of `H1 = -(hbar^2/2m) d^2/dx^2 + V1`.
//!
//! Second-order central differences with Dirichlet ends give a symmetric
//! tridiagonal matrix whose lowest eigenvalues are isolated by bisection on
//! the Sturm sequence count. Nothing here touches the catalog's spectrum or
//! the quadrature code, so agreement certifies the analytic levels.

use serde::Serialize;

use crate::catalog::{CatalogEntry, Which};
use crate::error::{Error, Result};
use crate::quadrature::find_turning_points;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Boundary {
    Dirichlet,
}

/// Uniform grid of `points` interior nodes strictly inside `(x_lo, x_hi)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    pub x_lo: f64,
    pub x_hi: f64,
    pub points: usize,
    pub boundary: Boundary,
}

impl GridSpec {
    pub fn new(x_lo: f64, x_hi: f64, points: usize) -> Result<Self> {
        let grid = Self {
            x_lo,
            x_hi,
            points,
            boundary: Boundary::Dirichlet,
        };
        grid.validate()?;
        Ok(grid)
    }

    fn validate(&self) -> Result<()> {
        if !(self.x_lo.is_finite() && self.x_hi.is_finite() && self.x_lo < self.x_hi) {
            return Err(Error::Configuration(format!(
                "grid box ({}, {}) must be finite and ordered",
                self.x_lo, self.x_hi
            )));
        }
        if self.points < 100 {
            return Err(Error::Configuration(format!(
                "at least 100 grid points required, got {}",
                self.points
            )));
        }
        Ok(())
    }

    pub fn spacing(&self) -> f64 {
        (self.x_hi - self.x_lo) / (self.points as f64 + 1.0)
    }

    pub fn with_points(self, points: usize) -> Self {
        Self { points, ..self }
    }
}

/// Number of eigenvalues strictly below `lambda`.
fn sturm_count(diagonal: &[f64], off: f64, lambda: f64) -> usize {
    let off2 = off * off;
    let mut count = 0;
    let mut q = diagonal[0] - lambda;
    if q < 0.0 {
        count += 1;
    }
    for d in &diagonal[1..] {
        let safe = if q.abs() < 1e-300 {
            1e-300f64.copysign(q)
        } else {
            q
        };
        q = (d - lambda) - off2 / safe;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// The `count` lowest eigenvalues of the tridiagonal matrix with the given
/// diagonal and constant off-diagonal, ascending.
pub fn lowest_eigenvalues(diagonal: &[f64], off: f64, count: usize) -> Vec<f64> {
    let n = diagonal.len();
    let count = count.min(n);
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for d in diagonal {
        lo = lo.min(d - 2.0 * off.abs());
        hi = hi.max(d + 2.0 * off.abs());
    }
    (0..count)
        .map(|k| {
            let (mut a, mut b) = (lo, hi);
            for _ in 0..200 {
                let mid = 0.5 * (a + b);
                if b - a <= 4.0 * f64::EPSILON * mid.abs().max(1e-300) {
                    break;
                }
                if sturm_count(diagonal, off, mid) > k {
                    b = mid;
                } else {
                    a = mid;
                }
            }
            0.5 * (a + b)
        })
        .collect()
}

fn solve(entry: &CatalogEntry, which: Which, grid: &GridSpec, n_levels: usize) -> Vec<f64> {
    let h = grid.spacing();
    let g2 = entry.units().gamma().powi(2);
    let kinetic = g2 / (h * h);
    let diagonal: Vec<f64> = (1..=grid.points)
        .map(|i| {
            let x = grid.x_lo + i as f64 * h;
            2.0 * kinetic + entry.potential_raw(x, entry.a1(), which)
        })
        .collect();
    lowest_eigenvalues(&diagonal, -kinetic, n_levels)
}

/// Lowest `n_levels` eigenvalues of the `which` partner on `grid`.
///
/// Box edges that are not hard walls of the domain are tested by doubling
/// their extent at fixed spacing; a level that moves by more than `1e-3` of
/// its scale signals a truncated box.
pub fn fd_spectrum(
    entry: &CatalogEntry,
    which: Which,
    grid: &GridSpec,
    n_levels: usize,
) -> Result<Vec<f64>> {
    grid.validate()?;
    if n_levels == 0 || n_levels * 10 > grid.points {
        return Err(Error::Configuration(format!(
            "n_levels must be in 1..={} for {} points",
            grid.points / 10,
            grid.points
        )));
    }
    let domain = entry.domain();
    if grid.x_lo < domain.lo || grid.x_hi > domain.hi {
        return Err(Error::Configuration(format!(
            "grid box ({}, {}) leaves the domain ({}, {})",
            grid.x_lo, grid.x_hi, domain.lo, domain.hi
        )));
    }
    let levels = solve(entry, which, grid, n_levels);

    let width = grid.x_hi - grid.x_lo;
    let open_lo = !(domain.lo_wall && grid.x_lo - domain.lo <= 1e-6 * width);
    let open_hi = !(domain.hi_wall && domain.hi - grid.x_hi <= 1e-6 * width);
    if open_lo || open_hi {
        let h = grid.spacing();
        let mut wide = *grid;
        let mut extra = 0usize;
        if open_lo {
            let ext = width.min(grid.x_lo - domain.lo);
            let steps = (ext / h).floor() as usize;
            wide.x_lo -= steps as f64 * h;
            extra += steps;
        }
        if open_hi {
            let ext = width.min(domain.hi - grid.x_hi);
            let steps = (ext / h).floor() as usize;
            wide.x_hi += steps as f64 * h;
            extra += steps;
        }
        if extra > 0 {
            wide.points += extra;
            let check = solve(entry, which, &wide, n_levels);
            let spread = (levels[n_levels - 1] - levels[0]).abs() / n_levels as f64;
            for (i, (a, b)) in levels.iter().zip(&check).enumerate() {
                let scale = a.abs().max(spread).max(f64::MIN_POSITIVE);
                if (a - b).abs() > 1e-3 * scale {
                    return Err(Error::Truncation {
                        level: i,
                        shift: (a - b).abs(),
                    });
                }
            }
        }
    }
    Ok(levels)
}

/// A box holding the classical region of the highest requested level plus a
/// margin of many decay lengths, and a spacing fine enough for ~1e-5 accuracy.
pub fn default_grid(entry: &CatalogEntry, n_levels: usize) -> Result<GridSpec> {
    let domain = entry.domain();
    let levels = entry.levels(n_levels.max(1));
    let top = *levels.last().expect("at least one level");
    let curve = |x: f64| entry.potential_raw(x, entry.a1(), Which::V1);
    let tp = find_turning_points(curve, top, &domain, Some(entry.superpotential_zero()))?;
    let width = tp.width().max(1e-3);
    let gamma = entry.units().gamma();

    let margin = |edge: f64, dir: f64| -> f64 {
        let excess = curve(edge + dir * width) - top;
        let decay = if excess > 0.0 {
            gamma / excess.sqrt()
        } else {
            width
        };
        width.max(12.0 * decay)
    };
    let x_hi = if domain.hi_wall && tp.x2_at_wall {
        domain.hi
    } else {
        (tp.x2 + margin(tp.x2, 1.0)).min(domain.hi)
    };
    // at a wall (including r = 0) the wavefunction vanishes exactly, and only
    // interior nodes are ever evaluated
    let x_lo = if domain.lo_wall && (tp.x1_at_wall || tp.x1 - domain.lo < 0.5 * width) {
        domain.lo
    } else {
        (tp.x1 - margin(tp.x1, -1.0)).max(domain.lo)
    };

    // local wavenumber at the bottom of the well sets the spacing
    let depth = top - curve(entry.superpotential_zero()).min(top - 1e-12);
    let wavenumber = (depth.max(0.0)).sqrt() / gamma + (n_levels as f64) / width;
    let mut target = 0.004 / wavenumber;
    if domain.lo_wall && !domain.hi_wall {
        // 1/r terms converge slowly; resolve the inner length scale too
        target = target.min(2e-3 * (entry.superpotential_zero() - domain.lo));
    }
    let points = (((x_hi - x_lo) / target).ceil() as usize).clamp(4000, 200_000);
    GridSpec::new(x_lo, x_hi, points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn sturm_count_two_by_two() {
        // [[1, -1], [-1, 1]] has eigenvalues 0 and 2
        let d = [1.0, 1.0];
        assert_eq!(sturm_count(&d, -1.0, -0.5), 0);
        assert_eq!(sturm_count(&d, 1.0, 1.0), 1);
        assert_eq!(sturm_count(&d, -1.0, 2.5), 2);
    }

    #[test]
    fn free_chain_closed_form() {
        let n = 60;
        let d = vec![2.0; n];
        let ev = lowest_eigenvalues(&d, -1.0, 5);
        for (k, e) in ev.iter().enumerate() {
            let exact = 2.0 - 2.0 * ((k + 1) as f64 * PI / (n as f64 + 1.0)).cos();
            assert!((e - exact).abs() < 1e-13);
        }
    }

    #[test]
    fn square_well_levels() {
        let sw = CatalogEntry::square_well(PI).unwrap();
        let grid = GridSpec::new(0.0, PI, 4000).unwrap();
        let ev = fd_spectrum(&sw, Which::V1, &grid, 4).unwrap();
        assert!(ev[0].abs() < 1e-6);
        for (e, exact) in ev[1..].iter().zip([3.0, 8.0, 15.0]) {
            assert!(((e - exact) / exact).abs() < 1e-4, "{e}");
        }
    }

    #[test]
    fn harmonic_levels_on_spec_box() {
        let h = CatalogEntry::harmonic(1.0).unwrap();
        let grid = GridSpec::new(-20.0, 20.0, 4000).unwrap();
        let ev = fd_spectrum(&h, Which::V1, &grid, 3).unwrap();
        for (e, exact) in ev.iter().zip([0.0, 1.0, 2.0]) {
            assert!((e - exact).abs() < 1e-4, "{e}");
        }
    }

    #[test]
    fn small_box_is_a_truncation_error() {
        let h = CatalogEntry::harmonic(1.0).unwrap();
        let grid = GridSpec::new(-2.0, 2.0, 1000).unwrap();
        assert!(matches!(
            fd_spectrum(&h, Which::V1, &grid, 3),
            Err(Error::Truncation { .. })
        ));
    }

    #[test]
    fn configuration_errors() {
        let sw = CatalogEntry::square_well(PI).unwrap();
        assert!(GridSpec::new(0.0, PI, 50).is_err());
        assert!(GridSpec::new(1.0, 0.0, 500).is_err());
        let grid = GridSpec::new(0.0, PI, 200).unwrap();
        assert!(fd_spectrum(&sw, Which::V1, &grid, 21).is_err());
        let outside = GridSpec::new(-1.0, PI, 500).unwrap();
        assert!(fd_spectrum(&sw, Which::V1, &outside, 2).is_err());
    }
}
