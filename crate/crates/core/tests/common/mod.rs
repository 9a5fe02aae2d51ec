//! Reference values computed without the library's numerics.
//!
//! Potentials are written out explicitly for the default parameters in units
//! hbar = 1, 2m = 1 (so gamma = 1 and h = 2 pi). Turning points come from
//! plain bisection and action integrals from the substitution
//! `x = x1 + (x2 - x1) sin^2(theta)`, which cancels both square-root ends
//! and the inverse square root of a Coulomb wall, so a uniform midpoint rule
//! converges fast.

#![allow(dead_code)]

use std::f64::consts::PI;

pub const H: f64 = 2.0 * PI;

/// Explicit `V1 = W^2 - W'` for the default catalog, plus `radial-ho` at
/// `l = 1` under the name `radial-ho-l1`.
pub fn v1(name: &str, x: f64) -> f64 {
    match name {
        // W = -cot x
        "square-well" => -1.0,
        // W = x/2
        "harmonic-1d" => 0.25 * x * x - 0.5,
        "radial-ho" => radial(x, 1.0),
        "radial-ho-l1" => radial(x, 2.0),
        // W = 1 - 1/r
        "coulomb" => 1.0 - 2.0 / x,
        // W = 6 - exp(-x)
        "morse" => {
            let e = (-x).exp();
            36.0 - 12.0 * e + e * e - e
        }
        // W = 6 tanh x
        "poschl-teller" => {
            let s = 1.0 / x.cosh();
            36.0 - 42.0 * s * s
        }
        _ => panic!("no reference potential for {name}"),
    }
}

/// `W = r/2 - a/r`
fn radial(r: f64, a: f64) -> f64 {
    let c = 0.5;
    c * c * r * r - c * (2.0 * a + 1.0) + a * (a - 1.0) / (r * r)
}

/// Exact levels from the textbook spectra, independent of the catalog.
pub fn level(name: &str, n: usize) -> f64 {
    let n = n as f64;
    match name {
        "square-well" => n * (n + 2.0),
        "harmonic-1d" => n,
        "radial-ho" | "radial-ho-l1" => 2.0 * n,
        "coulomb" => 1.0 - 1.0 / ((1.0 + n) * (1.0 + n)),
        "morse" | "poschl-teller" => 36.0 - (6.0 - n) * (6.0 - n),
        _ => panic!("no reference spectrum for {name}"),
    }
}

/// Domain, whether each end is a hard wall, and a point inside the well.
fn layout(name: &str) -> (f64, f64, bool, f64) {
    match name {
        "square-well" => (0.0, PI, true, PI / 2.0),
        "radial-ho" => (0.0, f64::INFINITY, true, 2f64.sqrt()),
        "radial-ho-l1" => (0.0, f64::INFINITY, true, 2.0),
        "coulomb" => (0.0, f64::INFINITY, true, 1.0),
        "morse" => (f64::NEG_INFINITY, f64::INFINITY, false, -(6f64).ln()),
        _ => (f64::NEG_INFINITY, f64::INFINITY, false, 0.0),
    }
}

fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let fa = f(a);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m == a || m == b {
            break;
        }
        if (f(m) > 0.0) == (fa > 0.0) {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Classical turning points of `v` at energy `e`; walls when `v` never
/// exceeds `e` before the domain ends.
pub fn turning_points(name: &str, v: impl Fn(f64) -> f64, e: f64) -> (f64, f64) {
    let (lo, hi, wall, inside) = layout(name);
    let g = |x: f64| v(x) - e;
    let outward = |dir: f64, limit: f64| -> f64 {
        let mut step = 0.5;
        let mut near = inside;
        loop {
            let far = if limit.is_finite() {
                // approach a finite end by halving the remaining gap
                near + 0.5 * (limit - near)
            } else {
                near + dir * step
            };
            if (far - limit).abs() < 1e-15 || far == near {
                return limit;
            }
            if g(far) > 0.0 {
                return bisect(g, near, far);
            }
            near = far;
            step *= 2.0;
        }
    };
    let x1 = if wall {
        outward(-1.0, lo)
    } else {
        outward(-1.0, f64::NEG_INFINITY)
    };
    let x2 = outward(1.0, hi);
    (x1, x2)
}

/// `2 sqrt(2m) int sqrt(e - v) dx` with 2m = 1.
pub fn action(name: &str, v: impl Fn(f64) -> f64 + Copy, e: f64) -> f64 {
    let (x1, x2) = turning_points(name, v, e);
    let len = x2 - x1;
    let n = 40_000;
    let step = 0.5 * PI / n as f64;
    let mut sum = 0.0;
    for i in 0..n {
        let t = (i as f64 + 0.5) * step;
        let x = x1 + len * t.sin().powi(2);
        let gap = e - v(x);
        if gap > 0.0 {
            sum += gap.sqrt() * len * (2.0 * t).sin();
        }
    }
    2.0 * sum * step
}

/// Maslov constant `S1(0) / h`.
pub fn eta(name: &str) -> f64 {
    action(name, |x| v1(name, x), 0.0) / H
}

/// Density of unit Gaussians on the first `levels` reference levels.
pub fn stick(name: &str, levels: usize, sigma: f64, e: f64) -> f64 {
    (0..levels)
        .map(|n| {
            let z = (e - level(name, n)) / sigma;
            (-0.5 * z * z).exp() / (sigma * (2.0 * PI).sqrt())
        })
        .sum()
}

/// `sum_{j even} C(k, j) B^(k - j/2) C^j` by direct expansion.
pub fn class2_inner(b: f64, c: f64, k: usize) -> f64 {
    let mut total = 0.0;
    for j in (0..=k).step_by(2) {
        let mut binom = 1.0;
        for i in 0..j {
            binom = binom * (k - i) as f64 / (i + 1) as f64;
        }
        total += binom * b.powf(k as f64 - j as f64 / 2.0) * c.powi(j as i32);
    }
    total
}
