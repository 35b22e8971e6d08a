//! Overlap selection rules, scaling laws and line shapes of the SH engine.

mod common;

use std::f64::consts::{PI, SQRT_2};

use common::{small_basis, triple};
use qpmshg::cli::autoconvolution_ratio;
use qpmshg::materials::ShgType;
use qpmshg::oracles::poling_harmonics_fft;
use qpmshg::scan::{degenerate_mismatch, find_phase_matched_wavelength};
use qpmshg::shg::{
    broaden, coupling_gamma, integrate, sh_spectrum, wavelength_grid, GammaModel, PumpSpec, SpectrumOptions,
};

#[test]
fn odd_lateral_parity_forbids_the_process() {
    let (study, basis) = small_basis();
    let d = &study.device;
    let allowed = basis.overlap(&triple(ShgType::TypeII, 1, "00+00->00"), d).unwrap().value.norm();
    for s in ["00+00->10", "10+00->00", "00+10->00", "10+10->10"] {
        let f = basis.overlap(&triple(ShgType::TypeII, 1, s), d).unwrap().value.norm();
        assert!(f < 1e-3 * allowed, "{s}: {f:e} vs {allowed:e}");
    }
    let t0 = basis.overlap(&triple(ShgType::Type0, 1, "00+00->00"), d).unwrap().value.norm();
    let f0 = basis.overlap(&triple(ShgType::Type0, 1, "00+10->00"), d).unwrap().value.norm();
    assert!(f0 < 1e-3 * t0, "{f0:e} vs {t0:e}");
}

#[test]
fn overlap_is_linear_in_the_poling_harmonic() {
    let (study, basis) = small_basis();
    let t = triple(ShgType::TypeII, 1, "00+00->00");
    let d1 = basis.overlap(&t, &study.device).unwrap().value;
    // |d₁| = 2 sin(πD)/π halves from D = 1/2 to D = 1/6
    let mut dev = study.device.clone();
    dev.poling.duty = 1.0 / 6.0;
    let d2 = basis.overlap(&t, &dev).unwrap().value;
    assert!((d2 / d1 - 0.5).norm() < 1e-12, "{}", d2 / d1);
}

#[test]
fn pump_exchange_leaves_type_0_overlap_unchanged() {
    let (study, basis) = small_basis();
    let a = basis.overlap(&triple(ShgType::Type0, 1, "00+01->00"), &study.device).unwrap().value;
    let b = basis.overlap(&triple(ShgType::Type0, 1, "01+00->00"), &study.device).unwrap().value;
    assert!(a.norm() > 0.0);
    assert!((a - b).norm() <= 1e-12 * a.norm(), "{a} vs {b}");
}

#[test]
fn coupling_limits() {
    let l = 10_500.0;
    let g0 = coupling_gamma(0.0, l);
    assert_eq!(g0.re, l);
    assert_eq!(g0.im, 0.0);
    assert!(coupling_gamma(2.0 * PI / l, l).norm() < 1e-12 * l);
    assert!((coupling_gamma(1e-3, l).norm() - coupling_gamma(-1e-3, l).norm()).abs() < 1e-12 * l);
}

#[test]
fn poling_harmonics_match_fft() {
    for duty in [0.5, 0.25, 0.375] {
        let fft = poling_harmonics_fft(duty, 6, 1 << 18);
        for (m, c) in (1..=6u32).zip(&fft) {
            let d = qpmshg::materials::poling_harmonic_amplitude(m, duty).unwrap();
            assert!((d - c).abs() <= 1e-6, "duty {duty} M{m}: {d} vs {c}");
        }
    }
}

#[test]
fn intensity_scales_with_the_square_of_pump_power() {
    let (study, basis) = small_basis();
    let model = basis.model(&[triple(ShgType::TypeII, 1, "00+00->00")], &study.device).unwrap();
    let pump = PumpSpec::gaussian(800.0, 3.0);
    let grid = wavelength_grid(398.0, 401.0, 301);
    let opts = SpectrumOptions::default();
    let a = sh_spectrum(&model, &pump, &grid, &opts).unwrap();
    let s2 = 3.7;
    let b = sh_spectrum(&model, &pump.clone().with_power(s2), &grid, &opts).unwrap();
    for (x, y) in a.intensity.iter().zip(&b.intensity) {
        if *x > 0.0 {
            assert!((y / x / (s2 * s2) - 1.0).abs() < 1e-10);
        }
    }
}

#[test]
fn broadening_conserves_integrated_intensity() {
    let (study, basis) = small_basis();
    let model = basis.model(&[triple(ShgType::TypeII, 1, "00+00->00")], &study.device).unwrap();
    let pump = PumpSpec::gaussian(800.0, 3.0);
    let grid = wavelength_grid(396.0, 404.0, 801);
    let ideal = sh_spectrum(&model, &pump, &grid, &SpectrumOptions::default()).unwrap();
    for w in [0.0, 0.3, 1.0] {
        let b = broaden(&ideal, w).unwrap();
        let r = b.integrated_intensity() / ideal.integrated_intensity();
        assert!((r - 1.0).abs() < 1e-6, "fwhm {w}: ratio {r}");
    }
}

#[test]
fn narrow_pump_traces_the_coupling_function() {
    // a near-monochromatic pump samples |Γ(Δβ)|² as the period is detuned
    let (study, basis) = small_basis();
    let t = triple(ShgType::TypeII, 1, "00+00->00");
    let mut dev = study.device.clone();
    dev.waveguide.geometry.length_mm = 1.0;
    let l = dev.length_um();
    let pm = find_phase_matched_wavelength(&t, &basis.tables, &dev.poling, None).unwrap();
    let pump = PumpSpec::gaussian(2.0 * pm.lambda2_nm, 0.004);
    let grid = wavelength_grid(pm.lambda2_nm - 0.01, pm.lambda2_nm + 0.01, 801);
    let k0 = 2.0 * PI / dev.poling.period_um;
    let power = |x: f64| {
        // detune the grating so that Δβ L/2 = x at the pump
        let period = 2.0 * PI / (k0 - 2.0 * x / l);
        let d = dev.clone();
        let model = basis.model(&[t], &d).unwrap().with_poling(d.poling.with_period(period));
        let s = sh_spectrum(&model, &pump, &grid, &SpectrumOptions::default()).unwrap();
        integrate(&s.lambda2_nm, &s.intensity)
    };
    let p0 = power(0.0);
    for x in [0.5f64, 1.0, 2.0, 2.5] {
        let want = (x.sin() / x).powi(2);
        let got = power(x) / p0;
        assert!((got - want).abs() < 1e-2, "x = {x}: {got} vs {want}");
    }
    let dbeta = degenerate_mismatch(&t, pm.lambda2_nm, &basis.tables, &dev.poling).unwrap();
    assert!(dbeta.abs() < 1e-6);
}

#[test]
fn flat_phase_matching_narrows_by_two_root_two() {
    let (study, basis) = small_basis();
    let model = basis.model(&[triple(ShgType::TypeII, 1, "00+00->00")], &study.device).unwrap();
    let pump = PumpSpec::gaussian(800.0, 3.0);
    let opts = SpectrumOptions {
        gamma: GammaModel::Flat,
        ..SpectrumOptions::default()
    };
    let grid = wavelength_grid(397.0, 403.0, 2401);
    let s = sh_spectrum(&model, &pump, &grid, &opts).unwrap();
    let engine = s.fwhm_nm().unwrap();
    let (oracle, _) = autoconvolution_ratio(&pump, 2001).unwrap();
    assert!((pump.fwhm_nm / engine / (2.0 * SQRT_2) - 1.0).abs() < 0.02);
    assert!((engine / oracle - 1.0).abs() < 0.01, "{engine} vs {oracle}");
}
