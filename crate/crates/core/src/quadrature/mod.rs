//! Turning points and the classical integrals over the allowed region.
//!
//! * `S(E) = 2 sqrt(2m) int_{x1}^{x2} sqrt(E - V(x)) dx` for `V = V1` (action) or
//!   `V = W^2` (SWKB action),
//! * `(sqrt(2m) / 2 pi hbar) int_{x1}^{x2} dx / sqrt(E - V1(x))`, the smooth
//!   density of states.
//!
//! All shipped curves are single wells, so the allowed region is one interval.

mod roots;
mod tanh_sinh;

use serde::Serialize;

use crate::catalog::{CatalogEntry, Domain};
use crate::error::{Error, Result};

pub use tanh_sinh::{QuadratureResult, TanhSinh};

/// Classical turning points `x1 <= x2`.
///
/// A flagged endpoint was clamped to a hard wall rather than found as a root.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TurningPoints {
    pub x1: f64,
    pub x2: f64,
    pub x1_at_wall: bool,
    pub x2_at_wall: bool,
}

impl TurningPoints {
    fn coincident(x: f64) -> Self {
        Self {
            x1: x,
            x2: x,
            x1_at_wall: false,
            x2_at_wall: false,
        }
    }

    /// True when the allowed region has collapsed to a point.
    pub fn is_coincident(&self) -> bool {
        self.x2 - self.x1 < 1e-10 * (1.0 + self.x1.abs())
    }

    pub fn width(&self) -> f64 {
        self.x2 - self.x1
    }
}

/// Curve integrated against: the partner potential `V1` or `W^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Target {
    V1,
    Wsq,
}

fn default_interior(domain: &Domain) -> f64 {
    match (domain.lo.is_finite(), domain.hi.is_finite()) {
        (true, true) => 0.5 * (domain.lo + domain.hi),
        (true, false) => domain.lo + 1.0,
        (false, true) => domain.hi - 1.0,
        (false, false) => 0.0,
    }
}

/// Finds the lowest point of a single-well curve, starting from `x0`.
fn locate_minimum<F: Fn(f64) -> f64>(curve: &F, x0: f64, domain: &Domain) -> (f64, f64) {
    // Steps outward toward a finite boundary by halving the remaining gap.
    let advance = |x: f64, step: f64, dir: f64| -> f64 {
        let bound = if dir > 0.0 { domain.hi } else { domain.lo };
        if bound.is_finite() {
            x + 0.5 * (bound - x)
        } else {
            x + dir * step
        }
    };
    let f0 = curve(x0);
    let step0 = 0.1 * (1.0 + x0.abs());
    let right = advance(x0, step0, 1.0);
    let left = advance(x0, step0, -1.0);
    let (fr, fl) = (curve(right), curve(left));
    if f0 <= fr && f0 <= fl {
        let (x, v) = roots::golden_section(curve, left, right);
        return if v < f0 { (x, v) } else { (x0, f0) };
    }
    let dir = if fr < fl { 1.0 } else { -1.0 };
    let (mut prev, mut cur, mut fcur) = if dir > 0.0 {
        (x0, right, fr)
    } else {
        (x0, left, fl)
    };
    let mut step = step0;
    for _ in 0..2000 {
        step *= 2.0;
        let next = advance(cur, step, dir);
        if next == cur || !domain.contains(next) {
            break;
        }
        let fnext = curve(next);
        if !(fnext < fcur) {
            let (lo, hi) = if prev < next {
                (prev, next)
            } else {
                (next, prev)
            };
            return roots::golden_section(curve, lo, hi);
        }
        prev = cur;
        cur = next;
        fcur = fnext;
    }
    // still descending into a wall (e.g. -1/r at the origin)
    (cur, fcur)
}

/// Walks from an interior point with `curve <= energy` toward one side of the
/// domain and returns the crossing, or the wall if the curve never exceeds `energy`.
fn search_side<F: Fn(f64) -> f64>(
    curve: &F,
    energy: f64,
    inside: f64,
    dir: f64,
    domain: &Domain,
) -> Result<(f64, bool)> {
    let g = |x: f64| {
        let v = curve(x) - energy;
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    let (bound, wall) = if dir > 0.0 {
        (domain.hi, domain.hi_wall)
    } else {
        (domain.lo, domain.lo_wall)
    };
    let mut prev = inside;
    let mut gprev = g(inside).min(0.0);
    let step0 = 0.25 * (1.0 + inside.abs());
    for j in 0..2100 {
        let probe = if bound.is_finite() {
            inside + (bound - inside) * (1.0 - 0.5f64.powi(j + 1))
        } else {
            inside + dir * step0 * 2f64.powi(j)
        };
        if probe == prev || probe == bound || !probe.is_finite() {
            break;
        }
        let gp = g(probe);
        if gp > 0.0 {
            let (a, b, ga, gb) = if prev < probe {
                (prev, probe, gprev, gp)
            } else {
                (probe, prev, gp, gprev)
            };
            return roots::brent(&g, a, b, ga, gb).map(|x| (x, false));
        }
        prev = probe;
        gprev = gp;
    }
    if wall && bound.is_finite() {
        Ok((bound, true))
    } else {
        Err(Error::numeric(
            format!("could not bracket a turning point (energy {energy}, direction {dir})"),
            None,
        ))
    }
}

/// Turning points of `curve` at `energy` on `domain`.
///
/// `hint` should be a point inside the well (ideally the minimum). When the
/// curve never rises above `energy` before a hard wall, the wall is returned.
pub fn find_turning_points<F: Fn(f64) -> f64>(
    curve: F,
    energy: f64,
    domain: &Domain,
    hint: Option<f64>,
) -> Result<TurningPoints> {
    let tol = 1e-12 * (1.0 + energy.abs());
    let x0 = hint
        .filter(|x| domain.contains(*x))
        .unwrap_or_else(|| default_interior(domain));
    let f0 = curve(x0);
    let inside = if f0 < energy - tol {
        x0
    } else {
        let (mut xm, mut vm) = locate_minimum(&curve, x0, domain);
        if hint.is_some() && f0 <= vm {
            xm = x0;
            vm = f0;
        }
        if vm > energy + tol {
            return Err(Error::NoClassicalMotion {
                energy,
                minimum: vm,
            });
        }
        if vm >= energy - tol {
            // a flat bottom bounded by walls keeps the whole interval
            let raised = energy + tol;
            if let (Ok((x2, true)), Ok((x1, true))) = (
                search_side(&curve, raised, xm, 1.0, domain),
                search_side(&curve, raised, xm, -1.0, domain),
            ) {
                return Ok(TurningPoints {
                    x1,
                    x2,
                    x1_at_wall: true,
                    x2_at_wall: true,
                });
            }
            return Ok(TurningPoints::coincident(xm));
        }
        xm
    };
    let (x2, x2_at_wall) = search_side(&curve, energy, inside, 1.0, domain)?;
    let (x1, x1_at_wall) = search_side(&curve, energy, inside, -1.0, domain)?;
    Ok(TurningPoints {
        x1,
        x2,
        x1_at_wall,
        x2_at_wall,
    })
}

#[derive(Debug, Clone, Copy)]
enum Kernel {
    Sqrt,
    InvSqrt,
}

/// Below this fraction of the interval, `E - V` next to a root is taken from
/// the tangent line; direct evaluation there is dominated by cancellation.
const TANGENT_ZONE: f64 = 1e-8;

fn classical_integral(
    entry: &CatalogEntry,
    energy: f64,
    target: Target,
    kernel: Kernel,
    rule: &TanhSinh,
) -> Result<QuadratureResult> {
    let curve = |x: f64| match target {
        Target::V1 => entry.v1_with_slope(x),
        Target::Wsq => entry.wsq_with_slope(x),
    };
    let tp = find_turning_points(
        |x| curve(x).0,
        energy,
        &entry.domain(),
        Some(entry.superpotential_zero()),
    )?;
    if tp.is_coincident() {
        return Ok(QuadratureResult::zero());
    }
    let zone = TANGENT_ZONE * tp.width();
    let slope1 = curve(tp.x1).1.abs();
    let slope2 = curve(tp.x2).1.abs();
    let integrand = |x: f64, d1: f64, d2: f64| {
        let gap = if d1 <= d2 && d1 < zone && !tp.x1_at_wall {
            slope1 * d1
        } else if d2 < d1 && d2 < zone && !tp.x2_at_wall {
            slope2 * d2
        } else {
            energy - curve(x).0
        };
        if !(gap > 0.0) || !gap.is_finite() {
            return 0.0;
        }
        match kernel {
            Kernel::Sqrt => gap.sqrt(),
            Kernel::InvSqrt => 1.0 / gap.sqrt(),
        }
    };
    rule.integrate(integrand, tp.x1, tp.x2)
}

/// `2 sqrt(2m) int sqrt(E - target(x)) dx` between the turning points.
pub fn action_integral(
    entry: &CatalogEntry,
    energy: f64,
    target: Target,
) -> Result<QuadratureResult> {
    action_integral_with(entry, energy, target, &TanhSinh::default())
}

pub fn action_integral_with(
    entry: &CatalogEntry,
    energy: f64,
    target: Target,
    rule: &TanhSinh,
) -> Result<QuadratureResult> {
    let factor = 2.0 * entry.units().sqrt_2m();
    classical_integral(entry, energy, target, Kernel::Sqrt, rule)
        .map(|r| r.scaled(factor))
        .map_err(|e| scale_best(e, factor))
}

/// `(sqrt(2m) / 2 pi hbar) int dx / sqrt(E - V1(x))`, which equals `dF/dE`.
pub fn smooth_density_integral(entry: &CatalogEntry, energy: f64) -> Result<QuadratureResult> {
    if !(energy > 0.0) {
        return Err(Error::Range {
            energy,
            reason: "the smooth-density integral needs E > 0".into(),
        });
    }
    let u = entry.units();
    let factor = u.sqrt_2m() / u.planck();
    classical_integral(
        entry,
        energy,
        Target::V1,
        Kernel::InvSqrt,
        &TanhSinh::default(),
    )
    .map(|r| r.scaled(factor))
    .map_err(|e| scale_best(e, factor))
}

fn scale_best(err: Error, factor: f64) -> Error {
    match err {
        Error::Numeric {
            message,
            best_estimate,
        } => Error::Numeric {
            message,
            best_estimate: best_estimate.map(|v| v * factor),
        },
        other => other,
    }
}
