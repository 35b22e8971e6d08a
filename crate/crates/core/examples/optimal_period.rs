//! Poling period that phase matches the fundamental modes of each process
//! type at a 800 nm pump, through the harmonic each type is meant to use.
//!
//! cargo run --release --example optimal_period [-- <pump nm>]

use qpmshg::materials::{ShgType, Waveguide};
use qpmshg::modes::ModeSolver;
use qpmshg::scan::optimal_poling_period;

fn main() -> qpmshg::Result<()> {
    let lambda1: f64 = std::env::args().nth(1).map_or(800.0, |s| s.parse().expect("pump wavelength in nm"));
    let solver = ModeSolver::default();
    let wg = Waveguide::default();
    for t in [ShgType::TypeII, ShgType::Type0, ShgType::TypeI] {
        let p = optimal_poling_period(t, lambda1, &solver, &wg)?;
        println!(
            "type {:<2}  Δβ = {:.5} µm⁻¹  first order {:.3} µm  M = {} -> Λ = {:.3} µm",
            t.to_string(),
            p.mismatch,
            p.first_order_um,
            p.harmonic,
            p.period_um
        );
    }
    Ok(())
}
