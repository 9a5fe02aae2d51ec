use std::f64::consts::PI;

use swkb_core::oracle::{default_grid, fd_spectrum, lowest_eigenvalues, GridSpec};
use swkb_core::{CatalogEntry, UnitSystem, Which};

fn entries() -> Vec<CatalogEntry> {
    let mut list = CatalogEntry::catalog(UnitSystem::default());
    list.push(CatalogEntry::radial_ho(1.0, 1).unwrap());
    list
}

#[test]
fn ground_state_is_at_zero_for_every_entry() {
    for e in entries() {
        let grid = default_grid(&e, 2).unwrap();
        let fd = fd_spectrum(&e, Which::V1, &grid, 2).unwrap();
        let e1 = e.spectrum_level(1).unwrap();
        assert!(fd[0].abs() < 1e-5 * e1, "{e}: {}", fd[0]);
    }
}

#[test]
fn partner_spectrum_is_shifted_by_one_level() {
    for e in entries() {
        let n = e.bound_state_count().map_or(3, |c| c.min(4) - 1);
        let grid = default_grid(&e, n + 1).unwrap();
        let partner = fd_spectrum(&e, Which::V2, &grid, n).unwrap();
        for (k, fd) in partner.iter().enumerate() {
            let exact = e.spectrum_level(k + 1).unwrap();
            assert!(
                (fd / exact - 1.0).abs() < 1e-4,
                "{e}: level {k} {fd} vs {exact}"
            );
        }
    }
}

#[test]
fn levels_respect_units() {
    let units = UnitSystem::new(2.0, 1.5).unwrap();
    let h = CatalogEntry::harmonic(1.0).unwrap().with_units(units);
    let grid = default_grid(&h, 4).unwrap();
    let fd = fd_spectrum(&h, Which::V1, &grid, 4).unwrap();
    for (n, v) in fd.iter().enumerate() {
        let exact = h.spectrum_level(n).unwrap();
        assert!(
            (v - exact).abs() < 1e-5 * (1.0 + exact),
            "{n}: {v} vs {exact}"
        );
    }
}

#[test]
fn explicit_box_matches_default() {
    let pt = CatalogEntry::poschl_teller(6.0, 1.0).unwrap();
    let grid = GridSpec::new(-15.0, 15.0, 20_000).unwrap();
    let fd = fd_spectrum(&pt, Which::V1, &grid, 4).unwrap();
    let auto = fd_spectrum(&pt, Which::V1, &default_grid(&pt, 4).unwrap(), 4).unwrap();
    for (a, b) in fd.iter().zip(&auto) {
        assert!((a - b).abs() < 1e-3 * (1.0 + a.abs()));
    }
}

#[test]
fn second_order_convergence() {
    let sw = CatalogEntry::square_well(PI).unwrap();
    let error = |points| {
        let grid = GridSpec::new(0.0, PI, points).unwrap();
        fd_spectrum(&sw, Which::V1, &grid, 3).unwrap()[2] - 8.0
    };
    let ratio = error(1000) / error(2000);
    assert!((ratio - 4.0).abs() < 0.05, "{ratio}");
}

#[test]
fn eigenvalues_of_a_diagonal_matrix() {
    let d = [5.0, 1.0, 3.0, 2.0];
    let ev = lowest_eigenvalues(&d, 0.0, 3);
    for (got, want) in ev.iter().zip([1.0, 2.0, 3.0]) {
        assert!((got - want).abs() < 1e-12);
    }
}
