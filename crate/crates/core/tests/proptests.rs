//! Randomized invariants of the cheap building blocks.

use proptest::prelude::*;
use qpmshg::materials::poling_harmonic_amplitude;
use qpmshg::modes::ModeLabel;
use qpmshg::shg::{
    broaden, coupling_gamma, integrate, nm_from_omega, omega_from_nm, wavelength_grid, BetaCurve, Spectrum,
};

fn spectrum(x: Vec<f64>, y: Vec<f64>) -> Spectrum {
    Spectrum {
        lambda2_nm: x,
        sh_modes: Vec::new(),
        amplitudes: Vec::new(),
        intensity: y,
        triples: Vec::new(),
        contributions: Vec::new(),
        broadening_nm: 0.0,
    }
}

proptest! {
    #[test]
    fn coupling_never_exceeds_length(db in -10.0f64..10.0, l in 1.0f64..20_000.0) {
        let g = coupling_gamma(db, l);
        prop_assert!(g.norm() <= l * (1.0 + 1e-12));
    }

    #[test]
    fn complementary_duties_share_harmonics(order in 1u32..12, duty in 0.01f64..0.99) {
        let a = poling_harmonic_amplitude(order, duty).unwrap();
        let b = poling_harmonic_amplitude(order, 1.0 - duty).unwrap();
        prop_assert!((a - b).abs() < 1e-12);
        prop_assert!(a <= 2.0 / (std::f64::consts::PI * order as f64) + 1e-15);
    }

    #[test]
    fn broadening_keeps_the_integral(
        y in prop::collection::vec(0.0f64..1.0, 20..200),
        fwhm in 0.01f64..3.0,
    ) {
        let x = wavelength_grid(395.0, 405.0, y.len());
        let before = integrate(&x, &y);
        let after = broaden(&spectrum(x, y), fwhm).unwrap().integrated_intensity();
        prop_assert!((after - before).abs() <= 1e-9 * before.max(1e-300));
    }

    #[test]
    fn mode_labels_round_trip(m in 0u32..40, n in 0u32..40) {
        let l = ModeLabel::new(m, n);
        prop_assert_eq!(l.to_string().parse::<ModeLabel>().unwrap(), l);
    }

    #[test]
    fn cubic_fit_reproduces_cubics(
        c in prop::array::uniform4(-5.0f64..5.0),
        lo in 2.0f64..4.0,
        span in 0.05f64..1.0,
    ) {
        let omegas: Vec<f64> = (0..9).map(|k| lo + span * k as f64 / 8.0).collect();
        let f = |w: f64| c[0] + c[1] * w + c[2] * w * w + c[3] * w * w * w;
        let betas: Vec<f64> = omegas.iter().map(|&w| f(w)).collect();
        let fit = BetaCurve::fit(&omegas, &betas).unwrap();
        for w in [lo, lo + 0.37 * span, lo + span] {
            let want = f(w);
            prop_assert!((fit.eval(w).unwrap() - want).abs() <= 1e-8 * (1.0 + want.abs()));
        }
        prop_assert!(fit.eval(lo + 2.0 * span).is_err());
    }

    #[test]
    fn wavelength_frequency_round_trip(nm in 200.0f64..3000.0) {
        prop_assert!((nm_from_omega(omega_from_nm(nm)) / nm - 1.0).abs() < 1e-14);
    }
}
