//! Translationally shape-invariant potentials.
//!
//! Every entry is described by its superpotential `W(x; a)` together with the
//! analytic derivatives `W'` and `W''`. The partner potentials follow from
//!
//! ```text
//! V1(x; a) = W^2 - gamma W'      V2(x; a) = W^2 + gamma W'      gamma = hbar / sqrt(2m)
//! ```
//!
//! The parameter chain is `a_k = a_1 + (k - 1) alpha`, and the remainders
//! `R(a_k)` are given in closed form so the shape-invariance residual checks
//! them against `V2 - V1` independently.

use std::f64::consts::PI;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Planck constant, mass and the derived scale `gamma = hbar / sqrt(2m)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UnitSystem {
    hbar: f64,
    mass: f64,
}

impl Default for UnitSystem {
    /// `hbar = 1`, `2m = 1`, hence `gamma = 1`.
    fn default() -> Self {
        Self {
            hbar: 1.0,
            mass: 0.5,
        }
    }
}

impl UnitSystem {
    pub fn new(hbar: f64, mass: f64) -> Result<Self> {
        if !(hbar.is_finite() && hbar > 0.0) {
            return Err(Error::Parameter(format!(
                "hbar must be positive, got {hbar}"
            )));
        }
        if !(mass.is_finite() && mass > 0.0) {
            return Err(Error::Parameter(format!(
                "mass must be positive, got {mass}"
            )));
        }
        Ok(Self { hbar, mass })
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// `sqrt(2m)`.
    pub fn sqrt_2m(&self) -> f64 {
        (2.0 * self.mass).sqrt()
    }

    /// `hbar / sqrt(2m)`, recomputed on every call.
    pub fn gamma(&self) -> f64 {
        self.hbar / self.sqrt_2m()
    }

    /// `h = 2 pi hbar`.
    pub fn planck(&self) -> f64 {
        2.0 * PI * self.hbar
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BarclayClass {
    #[serde(rename = "I")]
    ClassI,
    #[serde(rename = "II")]
    ClassII,
}

/// Coefficients of the first-order equation obeyed by `gamma W'`:
///
/// * class I: `gamma W' = A + B W^2 + C W`
/// * class II: `gamma W' = A + B W^2 + C W sqrt(A + B W^2)`
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BarclayCoefficients {
    pub class: BarclayClass,
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl BarclayCoefficients {
    pub fn class_i(a: f64, b: f64, c: f64) -> Self {
        Self {
            class: BarclayClass::ClassI,
            a,
            b,
            c,
        }
    }

    pub fn class_ii(a: f64, b: f64, c: f64) -> Self {
        Self {
            class: BarclayClass::ClassII,
            a,
            b,
            c,
        }
    }

    /// Right-hand side of the Barclay equation for a given value of `W`.
    pub fn rhs(&self, w: f64, x: f64) -> Result<f64> {
        let base = self.a + self.b * w * w;
        match self.class {
            BarclayClass::ClassI => Ok(base + self.c * w),
            BarclayClass::ClassII => {
                if base < 0.0 {
                    return Err(Error::Classification { x, radicand: base });
                }
                Ok(base + self.c * w * base.sqrt())
            }
        }
    }
}

/// Open interval of positions; an endpoint flagged as a wall confines the
/// motion (infinite square well walls, the radial origin).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Domain {
    pub lo: f64,
    pub hi: f64,
    pub lo_wall: bool,
    pub hi_wall: bool,
}

impl Domain {
    pub fn real_line() -> Self {
        Self {
            lo: f64::NEG_INFINITY,
            hi: f64::INFINITY,
            lo_wall: false,
            hi_wall: false,
        }
    }

    pub fn half_line() -> Self {
        Self {
            lo: 0.0,
            hi: f64::INFINITY,
            lo_wall: true,
            hi_wall: false,
        }
    }

    pub fn interval(lo: f64, hi: f64) -> Self {
        Self {
            lo,
            hi,
            lo_wall: true,
            hi_wall: true,
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        x > self.lo && x < self.hi
    }

    pub(crate) fn check(&self, x: f64) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::Domain {
                x,
                lo: self.lo,
                hi: self.hi,
            })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Which {
    V1,
    V2,
}

/// Potential family together with its physical parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Family {
    /// Infinite square well of width `L` on `(0, L)`.
    SquareWell { width: f64 },
    /// One-dimensional oscillator.
    Harmonic { omega: f64 },
    /// Three-dimensional oscillator in the `l`-th partial wave.
    RadialHo { omega: f64, l: u32 },
    /// Coulomb problem in the `l`-th partial wave; `q = 2m e^2 / hbar^2` is an inverse length.
    Coulomb { q: f64, l: u32 },
    /// Morse well `W = gamma (A - exp(-alpha x))`.
    Morse { depth: f64, range: f64 },
    /// Modified Poschl-Teller well `W = gamma A tanh(alpha x)`.
    PoschlTeller { depth: f64, range: f64 },
}

pub const ENTRY_NAMES: [&str; 6] = [
    "square-well",
    "harmonic-1d",
    "radial-ho",
    "coulomb",
    "morse",
    "poschl-teller",
];

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::SquareWell { .. } => "square-well",
            Family::Harmonic { .. } => "harmonic-1d",
            Family::RadialHo { .. } => "radial-ho",
            Family::Coulomb { .. } => "coulomb",
            Family::Morse { .. } => "morse",
            Family::PoschlTeller { .. } => "poschl-teller",
        }
    }

    /// Default parameters for a catalog name.
    pub fn default_for(name: &str) -> Result<Self> {
        Ok(match name {
            "square-well" => Family::SquareWell { width: PI },
            "harmonic-1d" => Family::Harmonic { omega: 1.0 },
            "radial-ho" => Family::RadialHo { omega: 1.0, l: 0 },
            "coulomb" => Family::Coulomb { q: 2.0, l: 0 },
            "morse" => Family::Morse {
                depth: 6.0,
                range: 1.0,
            },
            "poschl-teller" => Family::PoschlTeller {
                depth: 6.0,
                range: 1.0,
            },
            other => return Err(Error::UnknownEntry(other.to_string())),
        })
    }

    pub fn params(&self) -> Vec<(&'static str, f64)> {
        match *self {
            Family::SquareWell { width } => vec![("L", width)],
            Family::Harmonic { omega } => vec![("omega", omega)],
            Family::RadialHo { omega, l } => vec![("omega", omega), ("l", l as f64)],
            Family::Coulomb { q, l } => vec![("q", q), ("l", l as f64)],
            Family::Morse { depth, range } | Family::PoschlTeller { depth, range } => {
                vec![("A", depth), ("alpha", range)]
            }
        }
    }

    fn set_param(&mut self, key: &str, value: f64) -> Result<()> {
        let family = self.name();
        let bad = || Error::Parameter(format!("`{key}` is not a parameter of {family}"));
        match self {
            Family::SquareWell { width } => match key {
                "L" => *width = value,
                _ => return Err(bad()),
            },
            Family::Harmonic { omega } => match key {
                "omega" => *omega = value,
                _ => return Err(bad()),
            },
            Family::RadialHo { omega, l } => match key {
                "omega" => *omega = value,
                "l" => *l = angular_momentum(value)?,
                _ => return Err(bad()),
            },
            Family::Coulomb { q, l } => match key {
                "q" => *q = value,
                "l" => *l = angular_momentum(value)?,
                _ => return Err(bad()),
            },
            Family::Morse { depth, range } | Family::PoschlTeller { depth, range } => match key {
                "A" => *depth = value,
                "alpha" => *range = value,
                _ => return Err(bad()),
            },
        }
        Ok(())
    }

    fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::Parameter(format!(
                    "{name} must be positive, got {v}"
                )))
            }
        };
        match *self {
            Family::SquareWell { width } => positive("L", width),
            Family::Harmonic { omega } | Family::RadialHo { omega, .. } => positive("omega", omega),
            Family::Coulomb { q, .. } => positive("q", q),
            Family::Morse { depth, range } | Family::PoschlTeller { depth, range } => {
                positive("A", depth)?;
                positive("alpha", range)
            }
        }
    }
}

fn angular_momentum(value: f64) -> Result<u32> {
    if value >= 0.0 && value.fract() == 0.0 && value <= u32::MAX as f64 {
        Ok(value as u32)
    } else {
        Err(Error::Parameter(format!(
            "l must be a non-negative integer, got {value}"
        )))
    }
}

/// A shape-invariant potential in a fixed unit system.
///
/// The two override fields exist so tests and fault-isolation checks can
/// corrupt an otherwise correct entry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CatalogEntry {
    family: Family,
    units: UnitSystem,
    barclay_override: Option<BarclayCoefficients>,
    remainder_offset: f64,
}

impl fmt::Display for CatalogEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.name())?;
        for (i, (k, v)) in self.family.params().iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{k}={v}")?;
        }
        write!(f, ")")
    }
}

impl CatalogEntry {
    pub fn new(family: Family, units: UnitSystem) -> Result<Self> {
        family.validate()?;
        Ok(Self {
            family,
            units,
            barclay_override: None,
            remainder_offset: 0.0,
        })
    }

    /// Looks an entry up by its CLI name and applies `key=value` overrides.
    pub fn from_name(name: &str, params: &[(String, f64)], units: UnitSystem) -> Result<Self> {
        let mut family = Family::default_for(name)?;
        for (k, v) in params {
            family.set_param(k, *v)?;
        }
        Self::new(family, units)
    }

    /// Every shipped entry with default parameters.
    pub fn catalog(units: UnitSystem) -> Vec<Self> {
        ENTRY_NAMES
            .iter()
            .map(|n| Self::from_name(n, &[], units).expect("default parameters are valid"))
            .collect()
    }

    pub fn square_well(width: f64) -> Result<Self> {
        Self::new(Family::SquareWell { width }, UnitSystem::default())
    }

    pub fn harmonic(omega: f64) -> Result<Self> {
        Self::new(Family::Harmonic { omega }, UnitSystem::default())
    }

    pub fn radial_ho(omega: f64, l: u32) -> Result<Self> {
        Self::new(Family::RadialHo { omega, l }, UnitSystem::default())
    }

    pub fn coulomb(q: f64, l: u32) -> Result<Self> {
        Self::new(Family::Coulomb { q, l }, UnitSystem::default())
    }

    pub fn morse(depth: f64, range: f64) -> Result<Self> {
        Self::new(Family::Morse { depth, range }, UnitSystem::default())
    }

    pub fn poschl_teller(depth: f64, range: f64) -> Result<Self> {
        Self::new(Family::PoschlTeller { depth, range }, UnitSystem::default())
    }

    pub fn with_units(mut self, units: UnitSystem) -> Self {
        self.units = units;
        self
    }

    /// Replaces the Barclay coefficients (used to exercise failing residuals).
    pub fn with_barclay(mut self, coefficients: BarclayCoefficients) -> Self {
        self.barclay_override = Some(coefficients);
        self
    }

    /// Adds a constant to every remainder `R(a)`.
    pub fn with_remainder_offset(mut self, offset: f64) -> Self {
        self.remainder_offset = offset;
        self
    }

    pub fn name(&self) -> &'static str {
        self.family.name()
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn units(&self) -> UnitSystem {
        self.units
    }

    pub fn params(&self) -> Vec<(&'static str, f64)> {
        self.family.params()
    }

    /// First parameter of the shape-invariance chain.
    pub fn a1(&self) -> f64 {
        match self.family {
            Family::SquareWell { .. } => 1.0,
            Family::Harmonic { .. } => 0.0,
            Family::RadialHo { l, .. } | Family::Coulomb { l, .. } => l as f64 + 1.0,
            Family::Morse { depth, .. } | Family::PoschlTeller { depth, .. } => depth,
        }
    }

    /// Translation `alpha` in `a_2 = a_1 + alpha`.
    pub fn alpha_step(&self) -> f64 {
        match self.family {
            Family::SquareWell { .. }
            | Family::Harmonic { .. }
            | Family::RadialHo { .. }
            | Family::Coulomb { .. } => 1.0,
            Family::Morse { range, .. } | Family::PoschlTeller { range, .. } => -range,
        }
    }

    /// `a_k = a_1 + (k - 1) alpha`, `k >= 1`.
    pub fn chain_parameter(&self, k: usize) -> f64 {
        self.a1() + (k as f64 - 1.0) * self.alpha_step()
    }

    pub fn domain(&self) -> Domain {
        match self.family {
            Family::SquareWell { width } => Domain::interval(0.0, width),
            Family::Harmonic { .. } | Family::Morse { .. } | Family::PoschlTeller { .. } => {
                Domain::real_line()
            }
            Family::RadialHo { .. } | Family::Coulomb { .. } => Domain::half_line(),
        }
    }

    fn check_parameter(&self, a: f64) -> Result<()> {
        let ok = match self.family {
            Family::Harmonic { .. } => a.is_finite(),
            _ => a.is_finite() && a > 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Parameter(format!(
                "chain parameter a={a} is invalid for {}",
                self.name()
            )))
        }
    }

    /// `(W, W', W'')` at `(x, a)` without argument validation.
    pub fn superpotential_parts(&self, x: f64, a: f64) -> (f64, f64, f64) {
        let g = self.units.gamma();
        match self.family {
            Family::SquareWell { width } => {
                let k = PI / width;
                let (s, c) = (k * x).sin_cos();
                let cot = c / s;
                let csc2 = 1.0 / (s * s);
                (
                    -a * g * k * cot,
                    a * g * k * k * csc2,
                    -2.0 * a * g * k * k * k * csc2 * cot,
                )
            }
            Family::Harmonic { omega } => {
                let slope = 0.5 * self.units.sqrt_2m() * omega;
                (slope * x, slope, 0.0)
            }
            Family::RadialHo { omega, .. } => {
                let c = 0.5 * self.units.sqrt_2m() * omega;
                let d = g * a;
                let inv = 1.0 / x;
                (
                    c * x - d * inv,
                    c + d * inv * inv,
                    -2.0 * d * inv * inv * inv,
                )
            }
            Family::Coulomb { q, .. } => {
                let inv = 1.0 / x;
                (
                    g * (0.5 * q / a - a * inv),
                    g * a * inv * inv,
                    -2.0 * g * a * inv * inv * inv,
                )
            }
            Family::Morse { range, .. } => {
                let e = (-range * x).exp();
                (g * (a - e), g * range * e, -g * range * range * e)
            }
            Family::PoschlTeller { range, .. } => {
                let t = (range * x).tanh();
                let sech2 = 1.0 - t * t;
                let w1 = g * a * range * sech2;
                (g * a * t, w1, -2.0 * range * t * w1)
            }
        }
    }

    /// `W(x; a)`.
    pub fn superpotential_value(&self, x: f64, a: f64) -> Result<f64> {
        self.domain().check(x)?;
        self.check_parameter(a)?;
        Ok(self.superpotential_parts(x, a).0)
    }

    /// Position where `W(x; a_1) = 0`, i.e. the minimum of `W^2`.
    pub fn superpotential_zero(&self) -> f64 {
        let g = self.units.gamma();
        let a = self.a1();
        match self.family {
            Family::SquareWell { width } => 0.5 * width,
            Family::Harmonic { .. } | Family::PoschlTeller { .. } => 0.0,
            Family::RadialHo { omega, .. } => {
                let c = 0.5 * self.units.sqrt_2m() * omega;
                (g * a / c).sqrt()
            }
            Family::Coulomb { q, .. } => 2.0 * a * a / q,
            Family::Morse { range, .. } => -a.ln() / range,
        }
    }

    /// Closed-form partner potential and its slope at `(x, a)`.
    ///
    /// Algebraically this is `W^2 -+ gamma W'`, but the large `1/x^2` terms that
    /// cancel near walls and the radial origin are combined analytically first.
    pub fn partner_parts(&self, x: f64, a: f64, which: Which) -> (f64, f64) {
        let u = self.units;
        let g2 = u.gamma().powi(2);
        let sign = match which {
            Which::V1 => -1.0,
            Which::V2 => 1.0,
        };
        match self.family {
            Family::SquareWell { width } => {
                let k = PI / width;
                let e0 = g2 * k * k;
                let (sn, cs) = (k * x).sin_cos();
                let cot = cs / sn;
                let csc2 = 1.0 / (sn * sn);
                let coupling = a * (a + sign);
                (
                    e0 * (coupling * cot * cot + sign * a),
                    -2.0 * e0 * coupling * k * cot * csc2,
                )
            }
            Family::Harmonic { omega } => {
                let c = 0.5 * u.sqrt_2m() * omega;
                (
                    c * c * x * x + sign * 0.5 * u.hbar() * omega,
                    2.0 * c * c * x,
                )
            }
            Family::RadialHo { omega, .. } => {
                let c = 0.5 * u.sqrt_2m() * omega;
                let coupling = g2 * a * (a + sign);
                let inv = 1.0 / x;
                (
                    c * c * x * x + coupling * inv * inv - u.hbar() * omega * (a - 0.5 * sign),
                    2.0 * c * c * x - 2.0 * coupling * inv * inv * inv,
                )
            }
            Family::Coulomb { q, .. } => {
                let coupling = a * (a + sign);
                let inv = 1.0 / x;
                (
                    g2 * (0.25 * q * q / (a * a) - q * inv + coupling * inv * inv),
                    g2 * (q * inv * inv - 2.0 * coupling * inv * inv * inv),
                )
            }
            Family::Morse { range, .. } => {
                let e = (-range * x).exp();
                let d = a - e;
                (
                    g2 * (d * d + sign * range * e),
                    g2 * (2.0 * range * e * d - sign * range * range * e),
                )
            }
            Family::PoschlTeller { range, .. } => {
                let t = (range * x).tanh();
                let ch = (range * x).cosh();
                let sech2 = 1.0 / (ch * ch);
                (
                    g2 * (a * a * t * t + sign * a * range * sech2),
                    2.0 * g2 * a * range * t * sech2 * (a - sign * range),
                )
            }
        }
    }

    pub(crate) fn potential_raw(&self, x: f64, a: f64, which: Which) -> f64 {
        self.partner_parts(x, a, which).0
    }

    /// `V1` or `V2` at `a_1`.
    pub fn potential_value(&self, x: f64, which: Which) -> Result<f64> {
        self.domain().check(x)?;
        Ok(self.potential_raw(x, self.a1(), which))
    }

    /// `V1(x; a_1)` and its derivative, without domain checks.
    pub fn v1_with_slope(&self, x: f64) -> (f64, f64) {
        self.partner_parts(x, self.a1(), Which::V1)
    }

    /// `W(x; a_1)^2` and its derivative, without domain checks.
    pub fn wsq_with_slope(&self, x: f64) -> (f64, f64) {
        let (w, w1, _) = self.superpotential_parts(x, self.a1());
        (w * w, 2.0 * w * w1)
    }

    /// Closed-form remainder `R(a)` (plus any injected offset).
    pub fn remainder(&self, a: f64) -> f64 {
        let u = self.units;
        let g2 = u.gamma().powi(2);
        let r = match self.family {
            Family::SquareWell { width } => {
                let e0 = g2 * (PI / width).powi(2);
                e0 * (2.0 * a + 1.0)
            }
            Family::Harmonic { omega } => u.hbar() * omega,
            Family::RadialHo { omega, .. } => 2.0 * u.hbar() * omega,
            Family::Coulomb { q, .. } => {
                0.25 * g2 * q * q * (1.0 / (a * a) - 1.0 / ((a + 1.0) * (a + 1.0)))
            }
            Family::Morse { range, .. } | Family::PoschlTeller { range, .. } => {
                g2 * (a * a - (a - range) * (a - range))
            }
        };
        r + self.remainder_offset
    }

    /// Number of bound states of `V1`, `None` when the spectrum is infinite.
    pub fn bound_state_count(&self) -> Option<usize> {
        match self.family {
            Family::Morse { depth, range } | Family::PoschlTeller { depth, range } => {
                Some((depth / range).ceil() as usize)
            }
            _ => None,
        }
    }

    /// Lower edge of the continuum, if `V1` has one.
    pub fn continuum_threshold(&self) -> Option<f64> {
        let g2 = self.units.gamma().powi(2);
        match self.family {
            Family::Coulomb { q, .. } => {
                let a = self.a1();
                Some(0.25 * g2 * q * q / (a * a))
            }
            Family::Morse { depth, .. } | Family::PoschlTeller { depth, .. } => {
                Some(g2 * depth * depth)
            }
            _ => None,
        }
    }

    /// Characteristic energy scale used by the `1 + E` style tolerances.
    pub fn energy_scale(&self) -> f64 {
        self.spectrum_f(1)
    }

    fn spectrum_f(&self, n: usize) -> f64 {
        let u = self.units;
        let g2 = u.gamma().powi(2);
        let nf = n as f64;
        match self.family {
            Family::SquareWell { width } => {
                let e0 = g2 * (PI / width).powi(2);
                nf * (nf + 2.0) * e0
            }
            Family::Harmonic { omega } => nf * u.hbar() * omega,
            Family::RadialHo { omega, .. } => 2.0 * nf * u.hbar() * omega,
            Family::Coulomb { q, .. } => {
                let a = self.a1();
                0.25 * g2 * q * q * (1.0 / (a * a) - 1.0 / ((a + nf) * (a + nf)))
            }
            Family::Morse { depth, range } | Family::PoschlTeller { depth, range } => {
                let top = depth - nf * range;
                g2 * (depth * depth - top * top)
            }
        }
    }

    /// Exact level `E_n` of `V1`.
    pub fn spectrum_level(&self, n: usize) -> Result<f64> {
        if let Some(count) = self.bound_state_count() {
            if n >= count {
                return Err(Error::SpectrumExhausted { n, count });
            }
        }
        Ok(self.spectrum_f(n))
    }

    /// Levels `E_0 .. E_{n-1}`, stopping early when the bound spectrum ends.
    pub fn levels(&self, n: usize) -> Vec<f64> {
        let n = self.bound_state_count().map_or(n, |c| c.min(n));
        (0..n).map(|k| self.spectrum_f(k)).collect()
    }

    /// `d(n)`; identically one since radial problems are treated at fixed `l`.
    pub fn degeneracy(&self, _n: usize) -> f64 {
        1.0
    }

    fn check_energy(&self, energy: f64) -> Result<()> {
        if !(energy >= 0.0) {
            return Err(Error::Range {
                energy,
                reason: "energy must be non-negative".into(),
            });
        }
        if let Some(top) = self.continuum_threshold() {
            if energy >= top {
                return Err(Error::Range {
                    energy,
                    reason: format!("at or above the continuum threshold {top}"),
                });
            }
        }
        Ok(())
    }

    /// Continuous inverse `F(E)` of the level map, `F(E_n) = n`.
    pub fn counting_value(&self, energy: f64) -> Result<f64> {
        self.check_energy(energy)?;
        let u = self.units;
        let g2 = u.gamma().powi(2);
        Ok(match self.family {
            Family::SquareWell { width } => {
                let e0 = g2 * (PI / width).powi(2);
                (1.0 + energy / e0).sqrt() - 1.0
            }
            Family::Harmonic { omega } => energy / (u.hbar() * omega),
            Family::RadialHo { omega, .. } => energy / (2.0 * u.hbar() * omega),
            Family::Coulomb { q, .. } => {
                let a = self.a1();
                let s = 1.0 / (a * a) - 4.0 * energy / (g2 * q * q);
                1.0 / s.sqrt() - a
            }
            Family::Morse { depth, range } | Family::PoschlTeller { depth, range } => {
                (depth - (depth * depth - energy / g2).sqrt()) / range
            }
        })
    }

    /// `dF/dE`, the smooth density of states.
    pub fn counting_derivative(&self, energy: f64) -> Result<f64> {
        self.check_energy(energy)?;
        let u = self.units;
        let g2 = u.gamma().powi(2);
        Ok(match self.family {
            Family::SquareWell { width } => {
                let e0 = g2 * (PI / width).powi(2);
                0.5 / (e0 * (1.0 + energy / e0).sqrt())
            }
            Family::Harmonic { omega } => 1.0 / (u.hbar() * omega),
            Family::RadialHo { omega, .. } => 0.5 / (u.hbar() * omega),
            Family::Coulomb { q, .. } => {
                let a = self.a1();
                let s = 1.0 / (a * a) - 4.0 * energy / (g2 * q * q);
                2.0 / (g2 * q * q) * s.powf(-1.5)
            }
            Family::Morse { depth, range } | Family::PoschlTeller { depth, range } => {
                0.5 / (range * g2 * (depth * depth - energy / g2).sqrt())
            }
        })
    }

    /// Barclay coefficients at `a_1`.
    pub fn barclay(&self) -> BarclayCoefficients {
        self.barclay_override
            .unwrap_or_else(|| self.natural_barclay())
    }

    fn natural_barclay(&self) -> BarclayCoefficients {
        let u = self.units;
        let g = u.gamma();
        let a = self.a1();
        match self.family {
            Family::SquareWell { width } => {
                let e0 = g * g * (PI / width).powi(2);
                BarclayCoefficients::class_i(a * e0, 1.0 / a, 0.0)
            }
            Family::Harmonic { omega } => {
                BarclayCoefficients::class_i(0.5 * u.hbar() * omega, 0.0, 0.0)
            }
            Family::RadialHo { omega, .. } => {
                let b = 0.5 / a;
                BarclayCoefficients::class_ii(u.hbar() * omega, b, -b.sqrt())
            }
            Family::Coulomb { q, .. } => BarclayCoefficients::class_i(
                0.25 * g * g * q * q / (a * a * a),
                1.0 / a,
                -g * q / (a * a),
            ),
            Family::Morse { range, .. } => {
                BarclayCoefficients::class_i(g * g * range * a, 0.0, -g * range)
            }
            Family::PoschlTeller { range, .. } => {
                BarclayCoefficients::class_i(g * g * range * a, -range / a, 0.0)
            }
        }
    }

    /// `gamma W' - rhs(W)` at `a_1`; zero for a correctly classified entry.
    pub fn barclay_residual(&self, x: f64) -> Result<f64> {
        self.domain().check(x)?;
        let (w, w1, _) = self.superpotential_parts(x, self.a1());
        let rhs = self.barclay().rhs(w, x)?;
        Ok(self.units.gamma() * w1 - rhs)
    }

    /// `V2(x; a_1) - V1(x; a_2) - R(a_1)` with `a_2 = a_1 + alpha`.
    pub fn shape_invariance_residual(&self, x: f64) -> Result<f64> {
        self.domain().check(x)?;
        let a1 = self.a1();
        let a2 = a1 + self.alpha_step();
        Ok(self.potential_raw(x, a1, Which::V2)
            - self.potential_raw(x, a2, Which::V1)
            - self.remainder(a1))
    }
}
