//! Fourier amplitudes of the poling pattern for a few duty cycles, against
//! the FFT of the sampled square wave.
//!
//! cargo run --release --example poling_harmonics

use qpmshg::materials::poling_harmonic_amplitude;
use qpmshg::oracles::poling_harmonics_fft;

fn main() -> qpmshg::Result<()> {
    for duty in [0.5, 0.4, 0.25] {
        let fft = poling_harmonics_fft(duty, 5, 1 << 16);
        print!("duty {duty:.2}:");
        for (m, c) in (1..=5).zip(&fft) {
            let d = poling_harmonic_amplitude(m, duty)?;
            print!("  M{m} {d:.4} (fft {c:.4})");
        }
        println!();
    }
    Ok(())
}
