//! Counts and labels the guided modes of the nominal waveguide at the pump
//! and second-harmonic wavelengths.
//!
//! cargo run --release --example mode_census [-- <mesh resolution µm>]

use qpmshg::materials::{Polarization, Waveguide};
use qpmshg::modes::{ModeSolver, SolverSettings};

fn main() -> qpmshg::Result<()> {
    let mut settings = SolverSettings::default();
    if let Some(res) = std::env::args().nth(1) {
        settings.mesh.resolution_um = res.parse().expect("resolution in µm");
    }
    let solver = ModeSolver::new(settings);
    let wg = Waveguide::default();
    for lambda in [800.0, 400.0] {
        for pol in Polarization::BOTH {
            let t = std::time::Instant::now();
            let set = solver.solve(&wg, lambda, pol)?;
            println!(
                "{lambda} nm {pol}: {} guided modes ({} unknowns, {} Lanczos steps, {:.2} s)",
                set.modes.len(),
                set.stats.dimension,
                set.iterations,
                t.elapsed().as_secs_f64()
            );
            for m in set.modes.iter().take(8) {
                println!(
                    "   {}  n_eff = {:.6}  parity {:?}{}",
                    m.label,
                    m.n_eff,
                    m.parity,
                    if m.label_ambiguous { "  (ambiguous)" } else { "" }
                );
            }
        }
    }
    Ok(())
}
