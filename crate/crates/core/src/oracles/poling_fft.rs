use rustfft::{num_complex::Complex, FftPlanner};

/// Complex Fourier coefficient magnitudes `|c_M|`, `M = 1..=max_order`, of a ±1 square wave with
/// duty `duty`, from an FFT of `samples` points over one period.
///
/// Samples landing exactly on a jump take the mean value 0.
pub fn poling_harmonics_fft(duty: f64, max_order: usize, samples: usize) -> Vec<f64> {
    let n = samples;
    let mut buf: Vec<Complex<f64>> = (0..n)
        .map(|k| {
            let t = k as f64 / n as f64;
            let v = if t == 0.0 || t == duty {
                0.0
            } else if t < duty {
                1.0
            } else {
                -1.0
            };
            Complex::new(v, 0.0)
        })
        .collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    (1..=max_order).map(|m| buf[m].norm() / n as f64).collect()
}
