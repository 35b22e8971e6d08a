use num_complex::Complex64;

/// SH intensity for flat phase matching, `|Σ_k E(ω_k) E(ω₂ - ω_k)|² (Δω)²`,
/// by direct double summation.
///
/// `pump` is sampled on the uniform grid `omega0 + k·d_omega`; the result is on
/// the grid `2·omega0 + s·d_omega`, `s = 0 .. 2·len - 1`.
pub fn autoconvolution_spectrum(pump: &[Complex64], omega0: f64, d_omega: f64) -> (Vec<f64>, Vec<f64>) {
    let n = pump.len();
    let mut omega2 = Vec::with_capacity(2 * n - 1);
    let mut intensity = Vec::with_capacity(2 * n - 1);
    for s in 0..2 * n - 1 {
        let mut acc = Complex64::new(0.0, 0.0);
        let lo = s.saturating_sub(n - 1);
        let hi = s.min(n - 1);
        for k in lo..=hi {
            acc += pump[k] * pump[s - k];
        }
        omega2.push(2.0 * omega0 + s as f64 * d_omega);
        intensity.push((acc * d_omega).norm_sqr());
    }
    (omega2, intensity)
}
