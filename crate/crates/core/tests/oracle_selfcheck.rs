//! The test-side reference must agree with the known closed forms before
//! the acceptance run can lean on it.

mod common;

const NAMES: [&str; 7] = [
    "square-well",
    "harmonic-1d",
    "radial-ho",
    "radial-ho-l1",
    "coulomb",
    "morse",
    "poschl-teller",
];

#[test]
fn reference_eta_matches_known_values() {
    let want = [1.0, 0.5, 0.75, 0.5428932188134525, 1.0, 0.5];
    for (name, w) in NAMES.iter().zip(want) {
        let eta = common::eta(name);
        assert!((eta - w).abs() < 1e-7, "{name}: {eta} vs {w}");
    }
    // class I with B = -alpha/A = -1/6
    let b: f64 = -1.0 / 6.0;
    let pt = (1.0 - (1.0 - b).sqrt()) / b;
    assert!((common::eta("poschl-teller") - pt).abs() < 1e-7);
}

#[test]
fn reference_actions_quantize_the_reference_levels() {
    for name in NAMES {
        for n in 0..4 {
            let e = common::level(name, n);
            let s = common::action(name, |x| common::v1(name, x), e) / common::H;
            let eta = common::eta(name);
            assert!((s - n as f64 - eta).abs() < 1e-6, "{name} n={n}: {s}");
        }
    }
}
