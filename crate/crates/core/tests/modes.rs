//! Guided modes of the nominal waveguide: normalization, symmetry, ordering
//! and labels.

use std::sync::OnceLock;

use qpmshg::materials::{Polarization, Waveguide};
use qpmshg::modes::{ModeLabel, ModeSet, ModeSolver, Parity};

fn modes_800() -> &'static [ModeSet; 2] {
    static CELL: OnceLock<[ModeSet; 2]> = OnceLock::new();
    CELL.get_or_init(|| {
        let solver = ModeSolver::default();
        let wg = Waveguide::default();
        Polarization::BOTH.map(|p| solver.solve(&wg, 800.0, p).unwrap())
    })
}

#[test]
fn modes_carry_unit_power() {
    for set in modes_800() {
        for m in &set.modes {
            assert!((m.fields.power() - 1.0).abs() < 1e-10, "{} {}: {}", set.polarization, m.label, m.fields.power());
        }
    }
}

#[test]
fn parity_is_clean_and_matches_the_label() {
    for set in modes_800() {
        for m in &set.modes {
            let defect = m.parity_defect().expect("mirror symmetric mesh");
            assert!(defect < 1e-6, "{} {}: defect {defect}", set.polarization, m.label);
            let want = if m.label.m % 2 == 0 { Parity::Even } else { Parity::Odd };
            assert_eq!(m.parity, want, "{} {}", set.polarization, m.label);
        }
    }
}

#[test]
fn dominant_field_component_follows_polarization() {
    for set in modes_800() {
        let dom = set.polarization.electric_axis().index();
        let other = 1 - dom;
        for m in &set.modes {
            let e = |axis: usize| m.fields.d[axis].iter().map(|v| v.norm_sqr()).sum::<f64>();
            assert!(e(dom) > 100.0 * e(other), "{} {}", set.polarization, m.label);
        }
    }
}

#[test]
fn indices_are_ordered_inside_the_guided_window() {
    for set in modes_800() {
        let n: Vec<f64> = set.modes.iter().map(|m| m.n_eff).collect();
        assert!(n.windows(2).all(|w| w[0] >= w[1]), "{n:?}");
        assert!(n.iter().all(|&v| v > set.substrate_index && v < set.peak_index));
        let labels = set.labels();
        let mut unique = labels.clone();
        unique.sort();
        unique.dedup();
        assert_eq!(unique.len(), labels.len(), "{labels:?}");
        assert_eq!(set.modes[0].label, ModeLabel::FUNDAMENTAL);
    }
}

#[test]
fn residuals_within_tolerance() {
    let tol = ModeSolver::default().settings.tolerance;
    for set in modes_800() {
        for m in &set.modes {
            assert!(m.residual <= tol, "{} {}: {}", set.polarization, m.label, m.residual);
        }
    }
}

#[test]
fn top_count_is_a_prefix_of_the_full_set() {
    let solver = ModeSolver::default();
    let wg = Waveguide::default();
    let full = &modes_800()[1];
    let top = solver.solve_top(&wg, 800.0, Polarization::Tm, 2).unwrap();
    assert!(top.modes.len() >= 2);
    for (a, b) in top.modes.iter().zip(&full.modes) {
        assert_eq!(a.label, b.label);
        assert!((a.n_eff - b.n_eff).abs() < 1e-10);
    }
}
