//! The Maslov constant `eta = S1(0) / h`, by closed form, by series and by quadrature.
//!
//! For a class-I superpotential
//!
//! ```text
//! eta = 1/2 [1 + sum_{k>=1} B^k (2k-1)!! / ((k+1) (2k)!!)] = (1 - sqrt(1 - B)) / B
//! ```
//!
//! and for class II the `B^k` is replaced by the mean of `z+^k` and `z-^k`
//! with `z± = B ± C sqrt(B)`.

use serde::Serialize;

use crate::catalog::{BarclayClass, CatalogEntry};
use crate::error::{Error, Result};
use crate::quadrature::{action_integral, Target};

/// Slack on the `z <= 1` checks so `B ± C sqrt(B)` computed as `1 + ulp` is accepted.
const UNIT_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EtaMethod {
    ClosedI,
    ClosedII,
    SeriesI,
    SeriesII,
    Action,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EtaValue {
    pub value: f64,
    pub method: EtaMethod,
    /// Bound on the neglected series remainder; present only for series methods.
    pub tail_bound: Option<f64>,
}

/// `1/(1 + sqrt(1 - z))`, algebraically equal to `(1 - sqrt(1 - z)) / z` and
/// finite at `z = 0` where it takes the limit `1/2`.
fn half_root_ratio(z: f64) -> f64 {
    1.0 / (1.0 + (1.0 - z).max(0.0).sqrt())
}

fn check_unit_bound(name: &str, z: f64) -> Result<()> {
    if z.is_finite() && z <= 1.0 + UNIT_SLACK {
        Ok(())
    } else {
        Err(Error::Parameter(format!(
            "{name} = {z} exceeds 1; eta would be complex"
        )))
    }
}

fn z_pair(b: f64, c: f64) -> Result<(f64, f64)> {
    if !(b >= 0.0) {
        return Err(Error::Parameter(format!(
            "class-II eta needs B >= 0, got {b}"
        )));
    }
    let s = c * b.sqrt();
    let (zp, zm) = (b + s, b - s);
    check_unit_bound("z+", zp)?;
    check_unit_bound("z-", zm)?;
    Ok((zp, zm))
}

/// Class-I closed form `(1 - sqrt(1 - B)) / B`, equal to `1/2` at `B = 0`.
pub fn eta_class1_closed(b: f64) -> Result<EtaValue> {
    check_unit_bound("B", b)?;
    Ok(EtaValue {
        value: half_root_ratio(b),
        method: EtaMethod::ClosedI,
        tail_bound: None,
    })
}

/// Class-II closed form `sum_{z = z±} (1 - sqrt(1 - z)) / (2z)`.
pub fn eta_class2_closed(b: f64, c: f64) -> Result<EtaValue> {
    let (zp, zm) = z_pair(b, c)?;
    Ok(EtaValue {
        value: 0.5 * (half_root_ratio(zp) + half_root_ratio(zm)),
        method: EtaMethod::ClosedII,
        tail_bound: None,
    })
}

/// Closed-form eta for an entry, dispatched on its Barclay class.
pub fn eta_closed(entry: &CatalogEntry) -> Result<EtaValue> {
    let bc = entry.barclay();
    match bc.class {
        BarclayClass::ClassI => eta_class1_closed(bc.b),
        BarclayClass::ClassII => eta_class2_closed(bc.b, bc.c),
    }
}

/// `(2k-1)!! / ((k+1) (2k)!!)`, built by recurrence.
pub fn series_coefficient(k: usize) -> f64 {
    let mut c = 0.25;
    for j in 1..k.max(1) {
        c *= ratio(j);
    }
    if k == 0 {
        1.0
    } else {
        c
    }
}

/// `c_{k+1} / c_k = (2k+1)(k+1) / ((2k+2)(k+2))`.
fn ratio(k: usize) -> f64 {
    let k = k as f64;
    (2.0 * k + 1.0) * (k + 1.0) / ((2.0 * k + 2.0) * (k + 2.0))
}

/// Bound on `sum_{k > last} |c_k z^k|`, given the last included term index.
fn remainder_bound(z: f64, last: usize, last_coefficient: f64) -> f64 {
    if z == 0.0 {
        return 0.0;
    }
    let az = z.abs();
    let next = last_coefficient * ratio(last) * az.powi(last as i32 + 1);
    // c_k <= 1 / (sqrt(pi k) (k + 1)), so the tail is below 2 / sqrt(pi K)
    let mut bound = if az <= 1.0 + UNIT_SLACK {
        2.0 / (std::f64::consts::PI * last as f64).sqrt()
    } else {
        f64::INFINITY
    };
    if az < 1.0 {
        bound = bound.min(next / (1.0 - az));
    }
    if z < 0.0 && az <= 1.0 {
        // alternating with decreasing magnitude
        bound = bound.min(next);
    }
    bound
}

/// Partial sums for either class; `inner(k, z_powers)` yields the k-th weight.
fn sum_series(
    zs: &[f64],
    tol: f64,
    k_max: usize,
    inner: impl Fn(usize, &[f64]) -> f64,
) -> (f64, usize, f64, bool) {
    let mut powers: Vec<f64> = zs.to_vec();
    let mut coefficient = 0.25;
    let mut sum = 0.0;
    let mut k = 1;
    let converged = loop {
        let term = coefficient * inner(k, &powers);
        if !term.is_finite() {
            // |z| > 1: the terms grow without bound
            break false;
        }
        sum += term;
        if term.abs() < tol {
            break true;
        }
        if k >= k_max {
            break false;
        }
        coefficient *= ratio(k);
        for (p, z) in powers.iter_mut().zip(zs) {
            *p *= z;
        }
        k += 1;
    };
    (sum, k, coefficient, converged)
}

/// Truncated class-I series `1/2 [1 + sum B^k (2k-1)!! / ((k+1)(2k)!!)]`.
///
/// Stops once a term drops below `tol` or at `k_max`. At `B = 1` the terms
/// decay only like `k^(-3/2)`; the result is still returned with its tail bound.
pub fn eta_class1_series(b: f64, tol: f64, k_max: usize) -> Result<EtaValue> {
    check_unit_bound("B", b)?;
    let (sum, last, coefficient, converged) = sum_series(&[b], tol, k_max, |_, p| p[0]);
    let tail = 0.5 * remainder_bound(b, last, coefficient);
    finish(sum, tail, last, converged, tol, EtaMethod::SeriesI)
}

/// Truncated class-II series. For `k <= 25` the inner sum is evaluated as the
/// raw binomial double sum; beyond that as the mean of `z±^k`.
pub fn eta_class2_series(b: f64, c: f64, tol: f64, k_max: usize) -> Result<EtaValue> {
    let (zp, zm) = z_pair(b, c)?;
    let (sum, last, coefficient, converged) = sum_series(&[zp, zm], tol, k_max, |k, p| {
        if k <= RAW_INNER_LIMIT {
            class2_inner_raw(b, c, k)
        } else {
            0.5 * (p[0] + p[1])
        }
    });
    let tail =
        0.25 * (remainder_bound(zp, last, coefficient) + remainder_bound(zm, last, coefficient));
    finish(sum, tail, last, converged, tol, EtaMethod::SeriesII)
}

/// Largest `k` for which the raw class-II double sum is used.
pub const RAW_INNER_LIMIT: usize = 25;

fn finish(
    sum: f64,
    tail: f64,
    terms: usize,
    converged: bool,
    tol: f64,
    method: EtaMethod,
) -> Result<EtaValue> {
    let value = 0.5 * (1.0 + sum);
    if !converged && tail > 10.0 * tol {
        return Err(Error::Convergence {
            partial_sum: value,
            tail_bound: tail,
            terms,
        });
    }
    Ok(EtaValue {
        value,
        method,
        tail_bound: Some(tail),
    })
}

/// `sum_{n=0}^{floor(k/2)} k! / ((k-2n)! (2n)!) B^(k-n) C^(2n)`.
pub fn class2_inner_raw(b: f64, c: f64, k: usize) -> f64 {
    let mut total = 0.0;
    let mut binom = 1.0; // C(k, 0)
    for j in 0..=k {
        if j > 0 {
            binom *= (k - j + 1) as f64 / j as f64;
        }
        if j % 2 == 0 {
            let n = j / 2;
            total += binom * b.powi((k - n) as i32) * c.powi(j as i32);
        }
    }
    total
}

/// `((B + C sqrt B)^k + (B - C sqrt B)^k) / 2`.
pub fn class2_inner_mean(b: f64, c: f64, k: usize) -> f64 {
    let s = c * b.sqrt();
    0.5 * ((b + s).powi(k as i32) + (b - s).powi(k as i32))
}

/// `eta = S1(0) / h` from the action integral at zero energy.
pub fn eta_from_action(entry: &CatalogEntry) -> Result<EtaValue> {
    let s = action_integral(entry, 0.0, Target::V1)?;
    Ok(EtaValue {
        value: s.value / entry.units().planck(),
        method: EtaMethod::Action,
        tail_bound: None,
    })
}
