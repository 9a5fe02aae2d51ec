use std::f64::consts::PI;

use swkb_core::verify::{all_pass, run_all, run_check, trace_setup, CheckKind, ToleranceProfile};
use swkb_core::{CatalogEntry, UnitSystem};

#[test]
fn a_corrupted_entry_fails_only_its_own_reports() {
    let broken = CatalogEntry::morse(6.0, 1.0)
        .unwrap()
        .with_remainder_offset(1e-3);
    let mut entries = CatalogEntry::catalog(UnitSystem::default());
    entries.push(broken);
    let reports = run_all(&entries, &ToleranceProfile::default(), 7);
    assert!(!all_pass(&reports));
    let label = broken.to_string();
    let failed: Vec<_> = reports.iter().filter(|r| !r.pass).collect();
    assert!(!failed.is_empty());
    for r in &failed {
        assert_eq!(r.entry, label, "{} {}", r.entry, r.kind);
    }
    assert!(failed.iter().any(|r| r.kind == CheckKind::Shape));
}

#[test]
fn reports_are_sorted_and_complete() {
    let entries = vec![
        CatalogEntry::harmonic(1.0).unwrap(),
        CatalogEntry::square_well(PI).unwrap(),
    ];
    let reports = run_all(&entries, &ToleranceProfile::default(), 1);
    assert_eq!(reports.len(), 2 * CheckKind::ALL.len());
    let keys: Vec<_> = reports.iter().map(|r| (r.entry.clone(), r.kind)).collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    assert!(all_pass(&reports));
}

#[test]
fn seed_changes_samples_not_verdicts() {
    let c = CatalogEntry::coulomb(1.0, 2).unwrap();
    let a = run_check(&c, CheckKind::Semi, 1e-6, 1);
    let b = run_check(&c, CheckKind::Semi, 1e-6, 2);
    assert!(a.pass && b.pass);
    assert_ne!(a.samples[0].at, b.samples[0].at);
}

#[test]
fn trace_setup_resolves_the_levels() {
    for e in CatalogEntry::catalog(UnitSystem::default()) {
        let s = trace_setup(&e).unwrap();
        let levels = e.levels(2);
        assert!(s.sigma > 0.0 && s.sigma < (levels[1] - levels[0]) / 10.0);
        assert!(s.e_min < levels[1] && s.e_max > levels[1]);
        assert!((s.e_max - s.e_min) / (s.samples as f64 - 1.0) <= s.sigma / 5.0 * (1.0 + 1e-12));
    }
}

#[test]
fn wrong_barclay_coefficients_are_caught() {
    let h = CatalogEntry::harmonic(1.0).unwrap();
    let mut coefficients = h.barclay();
    coefficients.a *= 1.0 + 1e-6;
    let report = run_check(&h.with_barclay(coefficients), CheckKind::Barclay, 1e-10, 0);
    assert!(!report.pass);
    assert!(report.worst_residual > 1e-8);
}
