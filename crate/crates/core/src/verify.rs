//! Executable checks of the semiclassical identities, reported as JSON-ready records.
//!
//! Each check evaluates one identity on the lowest levels of an entry and/or
//! on seeded random energies and positions. Numerical failures never panic;
//! they turn into failed reports that carry the error text.

use std::fmt;
use std::str::FromStr;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::catalog::{BarclayClass, CatalogEntry, Which};
use crate::error::{Error, Result};
use crate::maslov::{eta_class1_series, eta_class2_series, eta_closed, eta_from_action};
use crate::oracle::{default_grid, fd_spectrum};
use crate::quadrature::{action_integral, find_turning_points, Target};
use crate::trace::{broadened_stick_density, density_curve, extract_peaks};

/// Highest quantum number inspected by the level-based checks.
pub const MAX_LEVEL: usize = 10;
/// Random energies per entry for the gap and counting checks.
pub const RANDOM_ENERGIES: usize = 20;
/// Quasi-random positions per entry for the analytic residuals.
pub const RESIDUAL_POINTS: usize = 1000;
/// Levels compared against the finite-difference oracle.
pub const ORACLE_LEVELS: usize = 5;
/// Largest `B` for which the eta series is compared; beyond it convergence
/// is too slow to be a useful cross-check.
pub const SERIES_B_LIMIT: f64 = 0.9;
const SERIES_TOL: f64 = 1e-10;
const SERIES_TERMS: usize = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckKind {
    Swkb,
    Wkb,
    Semi,
    Count,
    Shape,
    Barclay,
    Eta,
    Oracle,
    Trace,
}

impl CheckKind {
    pub const ALL: [CheckKind; 9] = [
        CheckKind::Swkb,
        CheckKind::Wkb,
        CheckKind::Semi,
        CheckKind::Count,
        CheckKind::Shape,
        CheckKind::Barclay,
        CheckKind::Eta,
        CheckKind::Oracle,
        CheckKind::Trace,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckKind::Swkb => "swkb",
            CheckKind::Wkb => "wkb",
            CheckKind::Semi => "semi",
            CheckKind::Count => "count",
            CheckKind::Shape => "shape",
            CheckKind::Barclay => "barclay",
            CheckKind::Eta => "eta",
            CheckKind::Oracle => "oracle",
            CheckKind::Trace => "trace",
        }
    }
}

impl fmt::Display for CheckKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CheckKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CheckKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Configuration(format!("unknown check kind '{s}'")))
    }
}

/// Tolerances used by [`run_all`].
///
/// The trace tolerance is a multiplier on the pair of bounds `sigma/2` in
/// peak location and 2% in peak height, so its default is 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ToleranceProfile {
    pub swkb: f64,
    pub wkb: f64,
    pub semi: f64,
    pub count: f64,
    pub shape: f64,
    pub barclay: f64,
    pub eta: f64,
    pub oracle: f64,
    pub trace: f64,
}

impl Default for ToleranceProfile {
    fn default() -> Self {
        Self {
            swkb: 1e-8,
            wkb: 1e-8,
            semi: 1e-6,
            count: 1e-6,
            shape: 1e-10,
            barclay: 1e-10,
            eta: 1e-6,
            oracle: 1e-3,
            trace: 1.0,
        }
    }
}

impl ToleranceProfile {
    pub fn get(&self, kind: CheckKind) -> f64 {
        match kind {
            CheckKind::Swkb => self.swkb,
            CheckKind::Wkb => self.wkb,
            CheckKind::Semi => self.semi,
            CheckKind::Count => self.count,
            CheckKind::Shape => self.shape,
            CheckKind::Barclay => self.barclay,
            CheckKind::Eta => self.eta,
            CheckKind::Oracle => self.oracle,
            CheckKind::Trace => self.trace,
        }
    }
}

/// One evaluated point: an energy, a position or a level, and its residual.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sample {
    pub at: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub entry: String,
    pub kind: CheckKind,
    pub tol: f64,
    pub worst_residual: f64,
    pub sample_count: usize,
    pub samples: Vec<Sample>,
    pub pass: bool,
    /// The quantity the check certifies, when there is a single one (eta).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

struct Outcome {
    samples: Vec<Sample>,
    worst: f64,
    value: Option<f64>,
}

impl Outcome {
    fn from_samples(samples: Vec<Sample>) -> Self {
        let worst = worst_of(&samples);
        Self {
            samples,
            worst,
            value: None,
        }
    }
}

fn worst_of(samples: &[Sample]) -> f64 {
    samples.iter().fold(0.0, |w, s| {
        // NaN must not slip past the comparison
        if s.residual.is_nan() || w.is_nan() {
            f64::NAN
        } else {
            w.max(s.residual)
        }
    })
}

/// Energy window and grid used by the trace check.
///
/// `sigma` is a twentieth of the smallest spacing among the inspected
/// levels; the window starts at `10 sigma` (clear of the half peak at
/// `E = 0`) and ends half way to the next level or to the continuum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceSetup {
    pub sigma: f64,
    pub e_min: f64,
    pub e_max: f64,
    pub samples: usize,
    pub k_max: usize,
}

pub fn trace_setup(entry: &CatalogEntry) -> Result<TraceSetup> {
    let count = entry.bound_state_count().unwrap_or(usize::MAX);
    if count < 2 {
        return Err(Error::Configuration(format!(
            "{entry} has a single bound level; nothing to resolve"
        )));
    }
    let top = 5.min(count - 1);
    let levels = entry.levels(top + 2);
    let spacing = (1..=top)
        .map(|n| levels[n] - levels[n - 1])
        .fold(f64::INFINITY, f64::min);
    let sigma = spacing / 20.0;
    let next = match levels.get(top + 1) {
        Some(&e) => e,
        None => entry
            .continuum_threshold()
            .expect("a finite spectrum ends at a continuum"),
    };
    let e_min = 10.0 * sigma;
    let e_max = levels[top] + 0.5 * (next - levels[top]);
    let samples = ((e_max - e_min) / (0.2 * sigma)).ceil() as usize + 1;
    Ok(TraceSetup {
        sigma,
        e_min,
        e_max,
        samples,
        k_max: 10_000,
    })
}

fn check_levels(entry: &CatalogEntry) -> Vec<f64> {
    entry.levels(MAX_LEVEL + 1)
}

/// Uniform energies in `(0.1 E_1, E_top)` with `E_top` the highest checked level.
pub fn random_energies(entry: &CatalogEntry, seed: u64) -> Vec<f64> {
    let levels = check_levels(entry);
    let lo = 0.1 * levels[1.min(levels.len() - 1)];
    let hi = levels[levels.len() - 1];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..RANDOM_ENERGIES)
        .map(|_| {
            if hi > lo {
                rng.random_range(lo..hi)
            } else {
                lo
            }
        })
        .collect()
}

/// Quasi-random positions (a seeded Kronecker sequence) spread over the
/// classical region of the highest checked level padded by half its width
/// on each side, clipped to the open domain.
pub fn residual_points(entry: &CatalogEntry, seed: u64) -> Result<Vec<f64>> {
    let domain = entry.domain();
    let top = *check_levels(entry).last().expect("at least one level");
    let curve = |x: f64| entry.potential_raw(x, entry.a1(), Which::V1);
    let tp = find_turning_points(curve, top, &domain, Some(entry.superpotential_zero()))?;
    let pad = 0.5 * tp.width();
    let lo = (tp.x1 - pad).max(domain.lo);
    let hi = (tp.x2 + pad).min(domain.hi);
    const INV_GOLDEN: f64 = 0.618_033_988_749_894_9;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let start: f64 = rng.random_range(0.0..1.0);
    Ok((1..=RESIDUAL_POINTS)
        .map(|i| {
            let u = (start + i as f64 * INV_GOLDEN).fract();
            // keep off walls that sit exactly at the window ends
            let u = u.clamp(1e-9, 1.0 - 1e-9);
            lo + u * (hi - lo)
        })
        .collect())
}

fn eta_value(entry: &CatalogEntry) -> Result<f64> {
    Ok(eta_closed(entry)?.value)
}

fn swkb(entry: &CatalogEntry) -> Result<Outcome> {
    let h = entry.units().planck();
    let samples = check_levels(entry)
        .into_iter()
        .enumerate()
        .map(|(n, e)| {
            let s = action_integral(entry, e, Target::Wsq)?.value;
            let nh = n as f64 * h;
            Ok(Sample {
                at: e,
                residual: (s - nh).abs() / (1.0 + nh),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Outcome::from_samples(samples))
}

fn wkb(entry: &CatalogEntry) -> Result<Outcome> {
    let h = entry.units().planck();
    let eta = eta_value(entry)?;
    let samples = check_levels(entry)
        .into_iter()
        .enumerate()
        .map(|(n, e)| {
            let s = action_integral(entry, e, Target::V1)?.value;
            Ok(Sample {
                at: e,
                residual: (s / h - n as f64 - eta).abs(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut out = Outcome::from_samples(samples);
    out.value = Some(eta);
    Ok(out)
}

/// `(S1(E) - S_W(E)) / h` at each energy.
pub fn action_gaps(entry: &CatalogEntry, energies: &[f64]) -> Result<Vec<f64>> {
    let h = entry.units().planck();
    energies
        .iter()
        .map(|&e| {
            let s1 = action_integral(entry, e, Target::V1)?.value;
            let sw = action_integral(entry, e, Target::Wsq)?.value;
            Ok((s1 - sw) / h)
        })
        .collect()
}

fn semi(entry: &CatalogEntry, seed: u64) -> Result<Outcome> {
    let eta = eta_value(entry)?;
    let energies = random_energies(entry, seed);
    let gaps = action_gaps(entry, &energies)?;
    let (min, max) = gaps
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &g| {
            (a.min(g), b.max(g))
        });
    let mean = gaps.iter().sum::<f64>() / gaps.len() as f64;
    let samples = energies
        .iter()
        .zip(&gaps)
        .map(|(&e, &g)| Sample {
            at: e,
            residual: (g - eta).abs(),
        })
        .collect();
    Ok(Outcome {
        samples,
        worst: (max - min).max((mean - eta).abs()),
        value: Some(mean),
    })
}

fn count(entry: &CatalogEntry, seed: u64) -> Result<Outcome> {
    let h = entry.units().planck();
    let samples = random_energies(entry, seed)
        .into_iter()
        .map(|e| {
            let sw = action_integral(entry, e, Target::Wsq)?.value;
            Ok(Sample {
                at: e,
                residual: (sw / h - entry.counting_value(e)?).abs(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Outcome::from_samples(samples))
}

/// Shape-invariance residual relative to `1 + |V2|`, since the partners grow
/// without bound at walls and at `r = 0`.
fn shape(entry: &CatalogEntry, seed: u64) -> Result<Outcome> {
    let samples = residual_points(entry, seed)?
        .into_iter()
        .map(|x| {
            let r = entry.shape_invariance_residual(x)?;
            let scale = 1.0 + entry.potential_raw(x, entry.a1(), Which::V2).abs();
            Ok(Sample {
                at: x,
                residual: r.abs() / scale,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Outcome::from_samples(samples))
}

/// Barclay residual relative to `1 + |gamma W'|`.
fn barclay(entry: &CatalogEntry, seed: u64) -> Result<Outcome> {
    let gamma = entry.units().gamma();
    let samples = residual_points(entry, seed)?
        .into_iter()
        .map(|x| {
            let r = entry.barclay_residual(x)?;
            let (_, w1, _) = entry.superpotential_parts(x, entry.a1());
            Ok(Sample {
                at: x,
                residual: r.abs() / (1.0 + (gamma * w1).abs()),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Outcome::from_samples(samples))
}

/// Closed form against quadrature (`at = 0`, the energy of `S1(0)`), and
/// against the series where it converges usefully (`at = B`).
fn eta(entry: &CatalogEntry) -> Result<Outcome> {
    let closed = eta_value(entry)?;
    let action = eta_from_action(entry)?.value;
    let mut samples = vec![Sample {
        at: 0.0,
        residual: (closed - action).abs(),
    }];
    let coefficients = entry.barclay();
    if coefficients.b <= SERIES_B_LIMIT {
        let series = match coefficients.class {
            BarclayClass::ClassI => eta_class1_series(coefficients.b, SERIES_TOL, SERIES_TERMS)?,
            BarclayClass::ClassII => {
                eta_class2_series(coefficients.b, coefficients.c, SERIES_TOL, SERIES_TERMS)?
            }
        };
        let slack = 1e-9 + series.tail_bound.unwrap_or(0.0);
        samples.push(Sample {
            at: coefficients.b,
            residual: ((closed - series.value).abs() - slack).max(0.0),
        });
    }
    let mut out = Outcome::from_samples(samples);
    out.value = Some(closed);
    Ok(out)
}

/// Relative error of the finite-difference levels, measured against
/// `max(E_n, E_1)` because the ground level is exactly zero.
fn oracle(entry: &CatalogEntry) -> Result<Outcome> {
    let exact = entry.levels(ORACLE_LEVELS);
    let grid = default_grid(entry, exact.len())?;
    let fd = fd_spectrum(entry, Which::V1, &grid, exact.len())?;
    let scale_floor = exact.get(1).copied().unwrap_or(entry.energy_scale());
    let samples = exact
        .iter()
        .zip(&fd)
        .map(|(&e, &f)| Sample {
            at: e,
            residual: (f - e).abs() / e.max(scale_floor),
        })
        .collect();
    Ok(Outcome::from_samples(samples))
}

/// Peaks of the smoothed trace formula against those of the broadened stick
/// spectrum. The residual is the larger of `|dE| / (sigma/2)` and
/// `|dh/h| / 0.02`, so the tolerance 1 reproduces both bounds.
fn trace(entry: &CatalogEntry) -> Result<Outcome> {
    let setup = trace_setup(entry)?;
    let curve = density_curve(
        entry,
        setup.e_min,
        setup.e_max,
        setup.samples,
        setup.sigma,
        setup.k_max,
    )?;
    let stick = broadened_stick_density(entry, &curve.energies, setup.sigma)?;
    let half = |c: &[f64]| 0.5 * c.iter().cloned().fold(0.0, f64::max);
    let peaks = extract_peaks(&curve, half(&curve.total));
    let reference = extract_peaks(&stick, half(&stick.total));
    if peaks.len() != reference.len() || reference.is_empty() {
        return Ok(Outcome {
            samples: vec![Sample {
                at: setup.e_max,
                residual: f64::INFINITY,
            }],
            worst: f64::INFINITY,
            value: None,
        });
    }
    let samples = (0..peaks.len())
        .map(|i| {
            let de = (peaks.energies[i] - reference.energies[i]).abs() / (0.5 * setup.sigma);
            let dh = (peaks.heights[i] / reference.heights[i] - 1.0).abs() / 0.02;
            Sample {
                at: reference.energies[i],
                residual: de.max(dh),
            }
        })
        .collect();
    Ok(Outcome::from_samples(samples))
}

fn evaluate(entry: &CatalogEntry, kind: CheckKind, seed: u64) -> Result<Outcome> {
    match kind {
        CheckKind::Swkb => swkb(entry),
        CheckKind::Wkb => wkb(entry),
        CheckKind::Semi => semi(entry, seed),
        CheckKind::Count => count(entry, seed),
        CheckKind::Shape => shape(entry, seed),
        CheckKind::Barclay => barclay(entry, seed),
        CheckKind::Eta => eta(entry),
        CheckKind::Oracle => oracle(entry),
        CheckKind::Trace => trace(entry),
    }
}

pub fn run_check(entry: &CatalogEntry, kind: CheckKind, tol: f64, seed: u64) -> CheckReport {
    let label = entry.to_string();
    match evaluate(entry, kind, seed) {
        Ok(out) => {
            let pass = out.worst <= tol;
            CheckReport {
                entry: label,
                kind,
                tol,
                worst_residual: out.worst,
                sample_count: out.samples.len(),
                samples: out.samples,
                pass,
                value: out.value,
                error: None,
            }
        }
        Err(err) => {
            let at = match &err {
                Error::Range { energy, .. } => *energy,
                Error::Domain { x, .. } | Error::Classification { x, .. } => *x,
                _ => f64::NAN,
            };
            CheckReport {
                entry: label,
                kind,
                tol,
                worst_residual: f64::INFINITY,
                sample_count: 1,
                samples: vec![Sample {
                    at,
                    residual: f64::INFINITY,
                }],
                pass: false,
                value: None,
                error: Some(err.to_string()),
            }
        }
    }
}

/// Every check on every entry, ordered by entry label and then by kind.
pub fn run_all(
    entries: &[CatalogEntry],
    profile: &ToleranceProfile,
    seed: u64,
) -> Vec<CheckReport> {
    let mut reports: Vec<CheckReport> = entries
        .iter()
        .flat_map(|entry| {
            CheckKind::ALL
                .into_iter()
                .map(move |kind| run_check(entry, kind, profile.get(kind), seed))
        })
        .collect();
    reports.sort_by(|a, b| a.entry.cmp(&b.entry).then(a.kind.cmp(&b.kind)));
    reports
}

pub fn all_pass(reports: &[CheckReport]) -> bool {
    reports.iter().all(|r| r.pass)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::BarclayCoefficients;
    use std::f64::consts::PI;

    #[test]
    fn square_well_swkb_passes() {
        let sw = CatalogEntry::square_well(PI).unwrap();
        let r = run_check(&sw, CheckKind::Swkb, 1e-8, 1);
        assert!(r.pass, "{r:?}");
        assert_eq!(r.sample_count, MAX_LEVEL + 1);
    }

    #[test]
    fn perturbed_barclay_fails() {
        let sw = CatalogEntry::square_well(PI).unwrap();
        let bent = sw.with_barclay(BarclayCoefficients::class_i(1.0, 1.0 + 1e-6, 0.0));
        let r = run_check(&bent, CheckKind::Barclay, 1e-10, 1);
        assert!(!r.pass);
        assert!(!r.samples.is_empty());
        assert!(run_check(&sw, CheckKind::Barclay, 1e-10, 1).pass);
    }

    #[test]
    fn radial_l1_eta_value() {
        let r1 = CatalogEntry::radial_ho(1.0, 1).unwrap();
        let r = run_check(&r1, CheckKind::Eta, 1e-6, 1);
        assert!(r.pass, "{r:?}");
        assert!((r.value.unwrap() - 0.5428932).abs() < 1e-6);
    }

    #[test]
    fn kinds_round_trip() {
        for k in CheckKind::ALL {
            assert_eq!(k.name().parse::<CheckKind>().unwrap(), k);
        }
        assert!("nope".parse::<CheckKind>().is_err());
    }

    #[test]
    fn empty_run_passes() {
        let reports = run_all(&[], &ToleranceProfile::default(), 0);
        assert!(reports.is_empty() && all_pass(&reports));
    }

    #[test]
    fn numeric_error_becomes_failed_report() {
        // a class-II override with a negative radicand cannot be evaluated
        let r = CatalogEntry::radial_ho(1.0, 0)
            .unwrap()
            .with_barclay(BarclayCoefficients::class_ii(-5.0, 0.5, 0.1));
        let report = run_check(&r, CheckKind::Barclay, 1e-10, 1);
        assert!(!report.pass);
        assert!(report.error.is_some());
        assert!(!report.samples.is_empty());
    }

    #[test]
    fn json_schema_fields() {
        let sw = CatalogEntry::square_well(PI).unwrap();
        let r = run_check(&sw, CheckKind::Swkb, 1e-8, 1);
        let v = serde_json::to_value(&r).unwrap();
        for key in ["entry", "kind", "tol", "worst_residual", "samples", "pass"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["kind"], "swkb");
        assert!(v["samples"][0].get("at").is_some());
    }
}
