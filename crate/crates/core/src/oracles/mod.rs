//! Reference routines used to validate the solver.
//!
//! None of these share numerical kernels with the main pipeline: the slab
//! solver has its own transfer matrices and bisection, the autoconvolution
//! is a plain double sum, the poling harmonics go through an FFT and the
//! dense eigenvalues through a Cholesky reduction.

mod autoconvolution;
mod dense;
mod poling_fft;
mod slab;

pub use autoconvolution::autoconvolution_spectrum;
pub use dense::dense_generalized_eigenvalues;
pub use poling_fft::poling_harmonics_fft;
pub use slab::{marcatili_rect_index, slab_effective_index, slab_modes, SlabLayer, SlabStack};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::materials::Polarization;
    use num_complex::Complex64;
    use std::f64::consts::PI;

    /// TE symmetric slab: `tan(κd/2) = γ/κ` for even modes.
    fn analytic_te0(core: f64, clad: f64, d: f64, lambda_um: f64) -> f64 {
        let k0 = 2.0 * PI / lambda_um;
        let f = |n: f64| {
            let kappa = k0 * (core * core - n * n).sqrt();
            let gamma = k0 * (n * n - clad * clad).sqrt();
            (kappa * d / 2.0).tan() - gamma / kappa
        };
        // fundamental lies where κd/2 < π/2
        let n_min = (core * core - (PI / (k0 * d)).powi(2)).sqrt().max(clad);
        let (mut a, mut b) = (n_min + 1e-12, core - 1e-12);
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            if f(m) > 0.0 {
                a = m;
            } else {
                b = m;
            }
        }
        0.5 * (a + b)
    }

    #[test]
    fn symmetric_slab_matches_transcendental_equation() {
        let s = SlabStack::symmetric(1.86, 1.845, 5.0);
        let n = slab_effective_index(&s, 800.0, Polarization::Te, 0).unwrap().unwrap();
        let exact = analytic_te0(1.86, 1.845, 5.0, 0.8);
        assert!((n - exact).abs() < 1e-10, "{n} vs {exact}");
    }

    #[test]
    fn no_contrast_no_mode() {
        let s = SlabStack::symmetric(1.845, 1.845, 5.0);
        assert_eq!(slab_effective_index(&s, 800.0, Polarization::Te, 0).unwrap(), None);
    }

    #[test]
    fn thick_slab_approaches_core_index() {
        let s = SlabStack::symmetric(1.86, 1.845, 2000.0);
        let n = slab_modes(&s, 800.0, Polarization::Te).unwrap()[0];
        assert!((n - 1.86).abs() < 1e-6);
    }

    #[test]
    fn tm_lies_below_te() {
        let s = SlabStack::symmetric(2.0, 1.5, 0.6);
        let te = slab_effective_index(&s, 800.0, Polarization::Te, 0).unwrap().unwrap();
        let tm = slab_effective_index(&s, 800.0, Polarization::Tm, 0).unwrap().unwrap();
        assert!(tm < te);
    }

    #[test]
    fn marcatili_bounds_and_symmetry() {
        let n = marcatili_rect_index(5.0, 5.0, 1.86, 1.845, 800.0, (0, 0)).unwrap().unwrap();
        assert!(n > 1.845 && n < 1.86);
        let a = marcatili_rect_index(4.0, 7.0, 1.86, 1.845, 800.0, (1, 0)).unwrap().unwrap();
        let b = marcatili_rect_index(7.0, 4.0, 1.86, 1.845, 800.0, (0, 1)).unwrap().unwrap();
        assert!((a - b).abs() < 1e-12);
        assert_eq!(marcatili_rect_index(1.0, 1.0, 1.86, 1.845, 800.0, (3, 3)).unwrap(), None);
    }

    #[test]
    fn fft_harmonics() {
        let c = poling_harmonics_fft(0.5, 3, 1 << 16);
        assert!((c[0] - 2.0 / PI).abs() < 1e-6);
        assert!(c[1].abs() < 1e-6);
        let c = poling_harmonics_fft(0.75, 2, 1 << 16);
        assert!((c[1] - 1.0 / PI).abs() < 1e-6);
    }

    #[test]
    fn two_line_pump_gives_three_lines() {
        let mut pump = vec![Complex64::new(0.0, 0.0); 21];
        pump[3] = Complex64::new(1.0, 0.0);
        pump[10] = Complex64::new(1.0, 0.0);
        let (_, i) = autoconvolution_spectrum(&pump, 1.0, 0.1);
        let lines: Vec<usize> = (0..i.len()).filter(|&s| i[s] > 0.0).collect();
        assert_eq!(lines, vec![6, 13, 20]);
    }

    #[test]
    fn symmetric_pump_symmetric_sh() {
        let pump: Vec<Complex64> = (0..41)
            .map(|k| Complex64::new((-((k as f64 - 20.0) / 6.0).powi(2)).exp(), 0.0))
            .collect();
        let (_, i) = autoconvolution_spectrum(&pump, 2.0, 0.01);
        let n = i.len();
        for s in 0..n / 2 {
            assert!((i[s] - i[n - 1 - s]).abs() <= 1e-12 * i[n / 2]);
        }
    }
}
