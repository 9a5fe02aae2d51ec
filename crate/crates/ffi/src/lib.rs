//! C ABI over `swkb-core`.
//!
//! Entries are opaque handles created by [`swkb_entry_new`] and released by
//! [`swkb_entry_free`]. Every fallible call returns a [`SwkbStatus`]; on
//! failure [`swkb_last_error_message`] describes the most recent error on the
//! calling thread. Results are written through caller-owned out-pointers;
//! the only allocations handed to the caller are JSON strings, which must be
//! released with [`swkb_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use swkb_core::maslov::{eta_closed, eta_from_action};
use swkb_core::oracle::{fd_spectrum, GridSpec};
use swkb_core::quadrature::action_integral;
use swkb_core::trace::density_curve;
use swkb_core::verify::{run_all, run_check, CheckKind, ToleranceProfile};
use swkb_core::{CatalogEntry, Error, Target, UnitSystem, Which};

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SwkbStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidString = 2,
    UnknownEntry = 3,
    Parameter = 4,
    Domain = 5,
    Range = 6,
    SpectrumExhausted = 7,
    Classification = 8,
    NoClassicalMotion = 9,
    Numeric = 10,
    Convergence = 11,
    Configuration = 12,
    Truncation = 13,
    Panic = 14,
}

/// Selects the curve under the action integral.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SwkbTarget {
    /// `V1 = W^2 - gamma W'`
    V1 = 0,
    /// `W^2`
    Wsq = 1,
}

/// Opaque catalog entry.
pub struct SwkbEntry(CatalogEntry);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> SwkbStatus {
    match err {
        Error::Domain { .. } => SwkbStatus::Domain,
        Error::Parameter(_) => SwkbStatus::Parameter,
        Error::UnknownEntry(_) => SwkbStatus::UnknownEntry,
        Error::SpectrumExhausted { .. } => SwkbStatus::SpectrumExhausted,
        Error::Range { .. } => SwkbStatus::Range,
        Error::Classification { .. } => SwkbStatus::Classification,
        Error::NoClassicalMotion { .. } => SwkbStatus::NoClassicalMotion,
        Error::Numeric { .. } => SwkbStatus::Numeric,
        Error::Convergence { .. } => SwkbStatus::Convergence,
        Error::Configuration(_) => SwkbStatus::Configuration,
        Error::Truncation { .. } => SwkbStatus::Truncation,
    }
}

struct Failure(SwkbStatus, String);

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        Failure(status_of(&err), err.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(SwkbStatus::NullPointer, format!("{what} is null"))
}

/// Run `body`, translating errors and panics into a status code.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> SwkbStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => SwkbStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            SwkbStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(SwkbStatus::InvalidString, format!("{what} is not UTF-8")))
}

unsafe fn entry_ref<'a>(p: *const SwkbEntry) -> Result<&'a CatalogEntry, Failure> {
    p.as_ref().map(|e| &e.0).ok_or_else(|| null("entry"))
}

unsafe fn write<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn out_slice<'a>(p: *mut f64, len: usize, what: &str) -> Result<&'a mut [f64], Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts_mut(p, len))
}

/// Message for the most recent failure on this thread, or null if none.
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn swkb_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static nul-terminated string.
#[no_mangle]
pub extern "C" fn swkb_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Create an entry by catalog name with `n_params` overrides given as
/// parallel arrays of keys and values (both may be null when `n_params` is 0).
///
/// # Safety
/// `name` and every key must be nul-terminated strings; `keys` and `values`
/// must hold `n_params` elements; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn swkb_entry_new(
    name: *const c_char,
    keys: *const *const c_char,
    values: *const f64,
    n_params: usize,
    hbar: f64,
    mass: f64,
    out: *mut *mut SwkbEntry,
) -> SwkbStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let name = read_str(name, "name")?;
        let mut params = Vec::with_capacity(n_params);
        if n_params > 0 {
            if keys.is_null() || values.is_null() {
                return Err(null("parameter arrays"));
            }
            for i in 0..n_params {
                let key = read_str(*keys.add(i), "parameter key")?;
                params.push((key.to_string(), *values.add(i)));
            }
        }
        let units = UnitSystem::new(hbar, mass)?;
        let entry = CatalogEntry::from_name(name, &params, units)?;
        out.write(Box::into_raw(Box::new(SwkbEntry(entry))));
        Ok(())
    })
}

/// Release an entry; null is ignored.
///
/// # Safety
/// `entry` must come from [`swkb_entry_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn swkb_entry_free(entry: *mut SwkbEntry) {
    if !entry.is_null() {
        drop(Box::from_raw(entry));
    }
}

/// Number of bound states, or 0 when the bound spectrum is infinite.
///
/// # Safety
/// `entry` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn swkb_bound_state_count(
    entry: *const SwkbEntry,
    out: *mut usize,
) -> SwkbStatus {
    guard(|| {
        let e = entry_ref(entry)?;
        write(out, e.bound_state_count().unwrap_or(0), "out")
    })
}

/// Exact level `E_n` of `V1`.
///
/// # Safety
/// `entry` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn swkb_spectrum_level(
    entry: *const SwkbEntry,
    n: usize,
    out: *mut f64,
) -> SwkbStatus {
    guard(|| {
        let e = entry_ref(entry)?;
        write(out, e.spectrum_level(n)?, "out")
    })
}

/// Counting function `F(E)`.
///
/// # Safety
/// `entry` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn swkb_counting_value(
    entry: *const SwkbEntry,
    energy: f64,
    out: *mut f64,
) -> SwkbStatus {
    guard(|| {
        let e = entry_ref(entry)?;
        write(out, e.counting_value(energy)?, "out")
    })
}

/// Smooth density `dF/dE`.
///
/// # Safety
/// `entry` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn swkb_counting_derivative(
    entry: *const SwkbEntry,
    energy: f64,
    out: *mut f64,
) -> SwkbStatus {
    guard(|| {
        let e = entry_ref(entry)?;
        write(out, e.counting_derivative(energy)?, "out")
    })
}

/// Classical action `2 sqrt(2m) int sqrt(E - curve) dx`; `abs_error` may be null.
///
/// # Safety
/// `entry` must be a live handle, `value` writable, `abs_error` null or writable.
#[no_mangle]
pub unsafe extern "C" fn swkb_action_integral(
    entry: *const SwkbEntry,
    energy: f64,
    target: SwkbTarget,
    value: *mut f64,
    abs_error: *mut f64,
) -> SwkbStatus {
    guard(|| {
        let e = entry_ref(entry)?;
        let target = match target {
            SwkbTarget::V1 => Target::V1,
            SwkbTarget::Wsq => Target::Wsq,
        };
        let r = action_integral(e, energy, target)?;
        write(value, r.value, "value")?;
        if !abs_error.is_null() {
            abs_error.write(r.abs_error_estimate);
        }
        Ok(())
    })
}

/// Maslov constant from the closed form.
///
/// # Safety
/// `entry` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn swkb_eta_closed(entry: *const SwkbEntry, out: *mut f64) -> SwkbStatus {
    guard(|| {
        let e = entry_ref(entry)?;
        write(out, eta_closed(e)?.value, "out")
    })
}

/// Maslov constant `S1(0)/h` by quadrature.
///
/// # Safety
/// `entry` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn swkb_eta_from_action(
    entry: *const SwkbEntry,
    out: *mut f64,
) -> SwkbStatus {
    guard(|| {
        let e = entry_ref(entry)?;
        write(out, eta_from_action(e)?.value, "out")
    })
}

/// Lowest `n_levels` finite-difference eigenvalues of `V1` on a Dirichlet
/// box of `points` interior nodes, written to `out[0..n_levels]`.
///
/// # Safety
/// `entry` must be a live handle and `out` must hold `n_levels` doubles.
#[no_mangle]
pub unsafe extern "C" fn swkb_fd_spectrum(
    entry: *const SwkbEntry,
    x_lo: f64,
    x_hi: f64,
    points: usize,
    n_levels: usize,
    out: *mut f64,
) -> SwkbStatus {
    guard(|| {
        let e = entry_ref(entry)?;
        let grid = GridSpec::new(x_lo, x_hi, points)?;
        let levels = fd_spectrum(e, Which::V1, &grid, n_levels)?;
        out_slice(out, n_levels, "out")?.copy_from_slice(&levels);
        Ok(())
    })
}

/// Smoothed trace-formula density on `samples` points of `[e_min, e_max]`.
/// Any of the output arrays may be null; non-null ones must hold `samples`
/// doubles.
///
/// # Safety
/// `entry` must be a live handle; output arrays as described.
#[no_mangle]
pub unsafe extern "C" fn swkb_density_curve(
    entry: *const SwkbEntry,
    e_min: f64,
    e_max: f64,
    samples: usize,
    sigma: f64,
    k_max: usize,
    energies: *mut f64,
    smooth: *mut f64,
    oscillating: *mut f64,
    total: *mut f64,
) -> SwkbStatus {
    guard(|| {
        let e = entry_ref(entry)?;
        let curve = density_curve(e, e_min, e_max, samples, sigma, k_max)?;
        for (dst, src) in [
            (energies, &curve.energies),
            (smooth, &curve.smooth),
            (oscillating, &curve.oscillating),
            (total, &curve.total),
        ] {
            if !dst.is_null() {
                std::slice::from_raw_parts_mut(dst, samples).copy_from_slice(src);
            }
        }
        Ok(())
    })
}

/// Run one named check. `passed` and `worst_residual` may be null.
///
/// # Safety
/// `entry` must be a live handle and `kind` a nul-terminated string.
#[no_mangle]
pub unsafe extern "C" fn swkb_run_check(
    entry: *const SwkbEntry,
    kind: *const c_char,
    tol: f64,
    seed: u64,
    passed: *mut bool,
    worst_residual: *mut f64,
) -> SwkbStatus {
    guard(|| {
        let e = entry_ref(entry)?;
        let kind: CheckKind = read_str(kind, "kind")?.parse()?;
        let report = run_check(e, kind, tol, seed);
        if !passed.is_null() {
            passed.write(report.pass);
        }
        if !worst_residual.is_null() {
            worst_residual.write(report.worst_residual);
        }
        Ok(())
    })
}

/// JSON array of reports for every check with default tolerances, on one
/// entry or, when `entry` is null, on the whole default catalog. The string
/// must be released with [`swkb_string_free`].
///
/// # Safety
/// `entry` must be null or a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn swkb_verify_json(
    entry: *const SwkbEntry,
    seed: u64,
    out: *mut *mut c_char,
) -> SwkbStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let entries = match entry.as_ref() {
            Some(e) => vec![e.0],
            None => CatalogEntry::catalog(UnitSystem::default()),
        };
        let reports = run_all(&entries, &ToleranceProfile::default(), seed);
        let text = serde_json::to_string(&reports).expect("reports serialize");
        let c = CString::new(text).expect("JSON has no interior nul");
        out.write(c.into_raw());
        Ok(())
    })
}

/// Release a string returned by this library; null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn swkb_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
