use std::path::PathBuf;
use std::process::{Command, Output};

use swkb_core::trace::{extract_peaks, DensityCurve};

fn swkb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_swkb"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    dir.join(format!("{}-{name}", std::process::id()))
}

/// The first stderr line is the JSON error; a usage hint may follow.
fn stderr_json(out: &Output) -> serde_json::Value {
    let text = String::from_utf8_lossy(&out.stderr);
    let first = text.lines().next().unwrap_or_default();
    serde_json::from_str(first).expect("stderr starts with a JSON error")
}

const SQUARE_WELL_TRACE: &[&str] = &[
    "trace",
    "square-well",
    "--emin",
    "0.5",
    "--emax",
    "35",
    "--sigma",
    "0.05",
    "--kmax",
    "10000",
    "--samples",
    "3500",
];

#[test]
fn verify_single_check_passes() {
    let out = swkb(&["verify", "square-well", "--check", "swkb"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("entry,kind,tol,worst_residual,pass"));
    let row = lines.next().unwrap();
    assert!(row.contains(",swkb,") && row.ends_with(",true"), "{row}");
}

#[test]
fn verify_json_reports() {
    let out = swkb(&[
        "verify",
        "harmonic-1d",
        "--check",
        "wkb",
        "--check",
        "eta",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let reports: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let reports = reports.as_array().unwrap();
    assert_eq!(reports.len(), 2);
    for r in reports {
        assert_eq!(r["pass"], true);
        assert!(r["worst_residual"].as_f64().unwrap() <= r["tol"].as_f64().unwrap());
    }
}

#[test]
fn zero_tolerance_fails_with_exit_one() {
    let out = swkb(&["verify", "coulomb", "--check", "wkb", "--tol", "0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stdout).unwrap().contains(",false"));
}

#[test]
fn square_well_trace_round_trips_through_csv() {
    let path = scratch("square-well.csv");
    let mut args = SQUARE_WELL_TRACE.to_vec();
    args.extend(["--out", path.to_str().unwrap()]);
    let out = swkb(&args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(out.stdout.is_empty());

    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("E,smooth,oscillating,total,reference"));
    let mut curve = DensityCurve {
        energies: vec![],
        smooth: vec![],
        oscillating: vec![],
        total: vec![],
        sigma: 0.05,
        k_max: 10_000,
    };
    for line in lines {
        let v: Vec<f64> = line.split(',').map(|s| s.parse().unwrap()).collect();
        assert_eq!(v.len(), 5);
        curve.energies.push(v[0]);
        curve.smooth.push(v[1]);
        curve.oscillating.push(v[2]);
        curve.total.push(v[3]);
    }
    assert_eq!(curve.len(), 3500);
    let max = curve.total.iter().cloned().fold(0.0, f64::max);
    let peaks = extract_peaks(&curve, 0.5 * max);
    assert_eq!(peaks.len(), 5);
    for (p, want) in peaks.energies.iter().zip([3.0, 8.0, 15.0, 24.0, 35.0]) {
        assert!((p - want).abs() < 0.025, "{p} vs {want}");
    }
}

#[test]
fn output_is_byte_stable() {
    let a = swkb(SQUARE_WELL_TRACE);
    let b = swkb(SQUARE_WELL_TRACE);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let a = swkb(&["verify", "--seed", "3"]);
    let b = swkb(&["verify", "--seed", "3"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn unknown_entry_is_a_usage_error() {
    let out = swkb(&["spectrum", "bogus-entry"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    let err = stderr_json(&out);
    assert!(err["message"].as_str().unwrap().contains("bogus-entry"));
}

#[test]
fn bad_parameters_are_usage_errors() {
    assert_eq!(
        swkb(&["spectrum", "harmonic-1d", "--param", "omega=-1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        swkb(&["spectrum", "harmonic-1d", "--param", "omega"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        swkb(&["spectrum", "harmonic-1d", "--frobnicate"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        swkb(&["oracle", "morse", "--xlo", "-5"]).status.code(),
        Some(2)
    );
    assert_eq!(
        swkb(&["verify", "morse", "--check", "nonsense"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn numeric_range_failure_exits_one_with_json() {
    // the Morse continuum starts at 36
    let out = swkb(&[
        "trace",
        "morse",
        "--emin",
        "1",
        "--emax",
        "40",
        "--sigma",
        "0.5",
        "--samples",
        "400",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    let err = stderr_json(&out);
    assert!(err["error"].is_string() && err["message"].is_string());
}

#[test]
fn help_exits_zero() {
    let out = swkb(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().contains("verify"));
}

#[test]
fn spectrum_rows() {
    let out = swkb(&["spectrum", "morse", "--levels", "20"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    // six bound states below the threshold
    assert_eq!(rows.len(), 7);
    assert_eq!(rows[0], "n,E");
    assert_eq!(rows[1], "0,0");
    assert_eq!(rows[2], "1,11");
}

#[test]
fn eta_column_ignores_hbar() {
    let eta = |hbar: &str| -> Vec<String> {
        let out = swkb(&["list", "--hbar", hbar]);
        assert_eq!(out.status.code(), Some(0));
        String::from_utf8(out.stdout)
            .unwrap()
            .lines()
            .skip(1)
            .map(|l| l.rsplit(',').next().unwrap().to_string())
            .collect()
    };
    let base = eta("1");
    assert_eq!(base.len(), 6);
    assert_eq!(base, eta("0.5"));
    assert_eq!(base, eta("2"));
}

#[test]
fn oracle_reports_small_errors() {
    let out = swkb(&["oracle", "poschl-teller", "--levels", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,exact,fd,rel_error"));
    for line in lines {
        let rel: f64 = line.rsplit(',').next().unwrap().parse().unwrap();
        assert!(rel < 1e-3, "{line}");
    }
}
