//! The `swkb` command line.
//!
//! Exit codes: 0 on success or when every check passes, 1 for a failed check
//! or a numerical error, 2 for any usage error (bad flags, unknown entry,
//! invalid parameter).

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::catalog::{BarclayClass, CatalogEntry, UnitSystem, Which};
use crate::error::{Error, Result};
use crate::maslov::eta_closed;
use crate::oracle::{default_grid, fd_spectrum, GridSpec};
use crate::trace::{broadened_stick_density, density_curve};
use crate::verify::{all_pass, run_all, run_check, CheckKind, ToleranceProfile};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "swkb",
    version,
    about = "Exact semiclassics of shape-invariant potentials"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Parameter override `key=value`, repeatable (e.g. `--param l=1`)
    #[arg(long = "param", value_name = "KEY=VALUE", value_parser = parse_param)]
    pub params: Vec<(String, f64)>,
    /// Reduced Planck constant
    #[arg(long, default_value_t = 1.0)]
    pub hbar: f64,
    /// Particle mass
    #[arg(long, default_value_t = 0.5)]
    pub mass: f64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write the artifact here instead of standard output
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List catalog entries with Barclay coefficients and eta
    List {
        #[command(flatten)]
        common: Common,
    },
    /// Print the exact levels E_n
    Spectrum {
        entry: String,
        #[arg(long, default_value_t = 10)]
        levels: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Run checks and report worst residuals; every check on the full catalog when
    /// no entry is given
    Verify {
        entry: Option<String>,
        /// Check kind, repeatable; all kinds when omitted
        #[arg(long = "check", value_parser = parse_kind)]
        checks: Vec<CheckKind>,
        /// Tolerance override (applies to every selected check)
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Sample the smoothed trace-formula density with a stick reference
    Trace {
        entry: String,
        #[arg(long)]
        emin: f64,
        #[arg(long)]
        emax: f64,
        #[arg(long)]
        sigma: f64,
        #[arg(long, default_value_t = 10_000)]
        kmax: usize,
        #[arg(long)]
        samples: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Compare the exact levels with a finite-difference diagonalisation
    Oracle {
        entry: String,
        #[arg(long, default_value_t = 5)]
        levels: usize,
        /// Interior grid points; chosen automatically when omitted
        #[arg(long)]
        points: Option<usize>,
        /// Box edges; both or neither
        #[arg(long, requires = "xhi", allow_hyphen_values = true)]
        xlo: Option<f64>,
        #[arg(long, requires = "xlo", allow_hyphen_values = true)]
        xhi: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
}

fn parse_param(s: &str) -> std::result::Result<(String, f64), String> {
    let (key, value) = s
        .split_once('=')
        .ok_or_else(|| format!("expected KEY=VALUE, got `{s}`"))?;
    let value: f64 = value
        .trim()
        .parse()
        .map_err(|_| format!("`{value}` is not a number"))?;
    Ok((key.trim().to_string(), value))
}

fn parse_kind(s: &str) -> std::result::Result<CheckKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// `%.12g`-style rendering: 12 significant digits, trailing zeros trimmed.
pub fn format_number(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let sci = format!("{:.11e}", x);
    let (mantissa, exponent) = sci.split_once('e').expect("exponent present");
    let exponent: i32 = exponent.parse().expect("integer exponent");
    if (-4..12).contains(&exponent) {
        let decimals = (11 - exponent).max(0) as usize;
        let fixed = format!("{:.*}", decimals, x);
        trim_zeros(&fixed).to_string()
    } else {
        format!("{}e{}", trim_zeros(mantissa), exponent)
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::UnknownEntry(_) | Error::Parameter(_) | Error::Configuration(_) => EXIT_USAGE,
        _ => EXIT_FAIL,
    }
}

fn error_kind(err: &Error) -> &'static str {
    match err {
        Error::Domain { .. } => "domain",
        Error::Parameter(_) => "parameter",
        Error::UnknownEntry(_) => "unknown_entry",
        Error::SpectrumExhausted { .. } => "spectrum_exhausted",
        Error::Range { .. } => "range",
        Error::Classification { .. } => "classification",
        Error::NoClassicalMotion { .. } => "no_classical_motion",
        Error::Numeric { .. } => "numeric",
        Error::Convergence { .. } => "convergence",
        Error::Configuration(_) => "configuration",
        Error::Truncation { .. } => "truncation",
    }
}

fn units(common: &Common) -> Result<UnitSystem> {
    UnitSystem::new(common.hbar, common.mass)
}

fn entry(name: &str, common: &Common) -> Result<CatalogEntry> {
    CatalogEntry::from_name(name, &common.params, units(common)?)
}

fn csv(header: &str, rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut text = String::from(header);
    text.push('\n');
    for row in rows {
        text.push_str(&row.join(","));
        text.push('\n');
    }
    text
}

fn params_label(entry: &CatalogEntry) -> String {
    entry
        .params()
        .iter()
        .map(|(k, v)| format!("{k}={}", format_number(*v)))
        .collect::<Vec<_>>()
        .join(";")
}

fn list(common: &Common) -> Result<String> {
    if !common.params.is_empty() {
        return Err(Error::Configuration("list does not take --param".into()));
    }
    let entries = CatalogEntry::catalog(units(common)?);
    let mut rows = Vec::new();
    for e in &entries {
        let b = e.barclay();
        let class = match b.class {
            BarclayClass::ClassI => "I",
            BarclayClass::ClassII => "II",
        };
        rows.push((e, class, b, eta_closed(e)?.value));
    }
    Ok(match common.format {
        Format::Csv => csv(
            "entry,params,class,A,B,C,eta",
            rows.iter().map(|(e, class, b, eta)| {
                vec![
                    e.name().to_string(),
                    params_label(e),
                    class.to_string(),
                    format_number(b.a),
                    format_number(b.b),
                    format_number(b.c),
                    format_number(*eta),
                ]
            }),
        ),
        Format::Json => {
            let items: Vec<_> = rows
                .iter()
                .map(|(e, class, b, eta)| {
                    json!({
                        "entry": e.name(),
                        "params": e.params().into_iter().collect::<std::collections::BTreeMap<_, _>>(),
                        "class": class,
                        "A": b.a, "B": b.b, "C": b.c,
                        "eta": eta,
                    })
                })
                .collect();
            serde_json::to_string_pretty(&items).expect("serializable") + "\n"
        }
    })
}

fn spectrum(name: &str, levels: usize, common: &Common) -> Result<String> {
    let e = entry(name, common)?;
    let values = e.levels(levels);
    Ok(match common.format {
        Format::Csv => csv(
            "n,E",
            values
                .iter()
                .enumerate()
                .map(|(n, v)| vec![n.to_string(), format_number(*v)]),
        ),
        Format::Json => {
            serde_json::to_string_pretty(&json!({"entry": e.to_string(), "levels": values}))
                .expect("serializable")
                + "\n"
        }
    })
}

fn verify(
    name: Option<&str>,
    checks: &[CheckKind],
    tol: Option<f64>,
    seed: u64,
    common: &Common,
) -> Result<(String, bool)> {
    if let Some(t) = tol {
        if !(t >= 0.0) {
            return Err(Error::Configuration(format!(
                "--tol must be non-negative, got {t}"
            )));
        }
    }
    let entries = match name {
        Some(n) => vec![entry(n, common)?],
        None if common.params.is_empty() => CatalogEntry::catalog(units(common)?),
        None => {
            return Err(Error::Configuration("--param needs an entry name".into()));
        }
    };
    let profile = ToleranceProfile::default();
    let reports = if checks.is_empty() && tol.is_none() {
        run_all(&entries, &profile, seed)
    } else {
        let kinds: Vec<CheckKind> = if checks.is_empty() {
            CheckKind::ALL.to_vec()
        } else {
            checks.to_vec()
        };
        entries
            .iter()
            .flat_map(|e| {
                kinds
                    .iter()
                    .map(move |&k| run_check(e, k, tol.unwrap_or(profile.get(k)), seed))
            })
            .collect()
    };
    let pass = all_pass(&reports);
    let text = match common.format {
        Format::Json => serde_json::to_string_pretty(&reports).expect("serializable") + "\n",
        Format::Csv => csv(
            "entry,kind,tol,worst_residual,pass",
            reports.iter().map(|r| {
                vec![
                    format!("\"{}\"", r.entry),
                    r.kind.to_string(),
                    format_number(r.tol),
                    format_number(r.worst_residual),
                    r.pass.to_string(),
                ]
            }),
        ),
    };
    Ok((text, pass))
}

#[allow(clippy::too_many_arguments)]
fn trace(
    name: &str,
    emin: f64,
    emax: f64,
    sigma: f64,
    kmax: usize,
    samples: usize,
    common: &Common,
) -> Result<String> {
    let e = entry(name, common)?;
    let curve = density_curve(&e, emin, emax, samples, sigma, kmax)?;
    let reference = broadened_stick_density(&e, &curve.energies, sigma)?;
    Ok(match common.format {
        Format::Csv => csv(
            "E,smooth,oscillating,total,reference",
            (0..curve.len()).map(|i| {
                vec![
                    format_number(curve.energies[i]),
                    format_number(curve.smooth[i]),
                    format_number(curve.oscillating[i]),
                    format_number(curve.total[i]),
                    format_number(reference.total[i]),
                ]
            }),
        ),
        Format::Json => {
            let value = json!({
                "entry": e.to_string(),
                "sigma": sigma,
                "k_max": kmax,
                "E": curve.energies,
                "smooth": curve.smooth,
                "oscillating": curve.oscillating,
                "total": curve.total,
                "reference": reference.total,
            });
            serde_json::to_string(&value).expect("serializable") + "\n"
        }
    })
}

fn oracle(
    name: &str,
    levels: usize,
    points: Option<usize>,
    bounds: Option<(f64, f64)>,
    common: &Common,
) -> Result<String> {
    let e = entry(name, common)?;
    let exact = e.levels(levels);
    if exact.is_empty() {
        return Err(Error::Configuration("--levels must be at least 1".into()));
    }
    let auto = default_grid(&e, exact.len())?;
    let mut grid = match bounds {
        Some((lo, hi)) => GridSpec::new(lo, hi, auto.points)?,
        None => auto,
    };
    if let Some(p) = points {
        grid = GridSpec::new(grid.x_lo, grid.x_hi, p)?;
    }
    let fd = fd_spectrum(&e, Which::V1, &grid, exact.len())?;
    let floor = exact.get(1).copied().unwrap_or(e.energy_scale());
    let rows: Vec<(usize, f64, f64, f64)> = exact
        .iter()
        .zip(&fd)
        .enumerate()
        .map(|(n, (&x, &f))| (n, x, f, (f - x).abs() / x.max(floor)))
        .collect();
    Ok(match common.format {
        Format::Csv => csv(
            "n,exact,fd,rel_error",
            rows.iter().map(|&(n, x, f, r)| {
                vec![
                    n.to_string(),
                    format_number(x),
                    format_number(f),
                    format_number(r),
                ]
            }),
        ),
        Format::Json => {
            let value = json!({
                "entry": e.to_string(),
                "grid": grid,
                "levels": rows.iter().map(|&(n, x, f, r)| json!({"n": n, "exact": x, "fd": f, "rel_error": r})).collect::<Vec<_>>(),
            });
            serde_json::to_string_pretty(&value).expect("serializable") + "\n"
        }
    })
}

fn execute(command: &Command) -> Result<(String, bool, Option<PathBuf>)> {
    Ok(match command {
        Command::List { common } => (list(common)?, true, common.out.clone()),
        Command::Spectrum {
            entry,
            levels,
            common,
        } => (spectrum(entry, *levels, common)?, true, common.out.clone()),
        Command::Verify {
            entry,
            checks,
            tol,
            seed,
            common,
        } => {
            let (text, pass) = verify(entry.as_deref(), checks, *tol, *seed, common)?;
            (text, pass, common.out.clone())
        }
        Command::Trace {
            entry,
            emin,
            emax,
            sigma,
            kmax,
            samples,
            common,
        } => (
            trace(entry, *emin, *emax, *sigma, *kmax, *samples, common)?,
            true,
            common.out.clone(),
        ),
        Command::Oracle {
            entry,
            levels,
            points,
            xlo,
            xhi,
            common,
        } => (
            oracle(entry, *levels, *points, xlo.zip(*xhi), common)?,
            true,
            common.out.clone(),
        ),
    })
}

/// Parse `argv` (including the program name), run the command and return
/// the exit code. Artifacts go to `stdout` unless `--out` is given;
/// diagnostics go to `stderr`.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            let text = err.render().to_string();
            return match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = stdout.write_all(text.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = stderr.write_all(text.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    match execute(&cli.command) {
        Ok((text, pass, out)) => {
            let written = match out {
                Some(path) => fs::write(&path, text.as_bytes())
                    .map_err(|e| format!("cannot write {}: {e}", path.display())),
                None => stdout
                    .write_all(text.as_bytes())
                    .map_err(|e| format!("cannot write output: {e}")),
            };
            match written {
                Ok(()) if pass => EXIT_OK,
                Ok(()) => EXIT_FAIL,
                Err(msg) => {
                    let _ = writeln!(stderr, "{}", json!({"error": "io", "message": msg}));
                    EXIT_FAIL
                }
            }
        }
        Err(err) => {
            let code = exit_code(&err);
            let _ = writeln!(
                stderr,
                "{}",
                json!({"error": error_kind(&err), "message": err.to_string()})
            );
            if code == EXIT_USAGE {
                let _ = writeln!(stderr, "run `swkb --help` for usage");
            }
            code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(format_number(0.0), "0");
        assert_eq!(format_number(3.0), "3");
        assert_eq!(format_number(0.1), "0.1");
        assert_eq!(format_number(1.0 / 3.0), "0.333333333333");
        assert_eq!(format_number(123456.789), "123456.789");
        assert_eq!(format_number(-2.5e-9), "-2.5e-9");
        assert_eq!(format_number(1e15), "1e15");
        assert_eq!(format_number(7.978845608028654), "7.97884560803");
    }

    #[test]
    fn param_parsing() {
        assert_eq!(parse_param("l=1").unwrap(), ("l".to_string(), 1.0));
        assert!(parse_param("l").is_err());
        assert!(parse_param("l=x").is_err());
    }
}
