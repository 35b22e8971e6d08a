//! Substrate indices and the diffused index profile of the nominal guide at
//! the pump and SH wavelengths, plus a depth cut through the channel center.
//!
//! cargo run --release --example index_profile

use qpmshg::materials::{Axis, Waveguide};

fn main() -> qpmshg::Result<()> {
    let wg = Waveguide::default();
    let g = &wg.geometry;
    println!("w = {} µm, h = {} µm, L = {} mm", g.width_um, g.depth_um, g.length_mm);
    for lambda in [800.0, 400.0] {
        let s = wg.sampler(lambda)?;
        for axis in [Axis::X, Axis::Y] {
            println!(
                "{lambda} nm  n_{axis:?}: substrate {:.5}  surface {:.5}",
                s.substrate_index(axis),
                s.peak_index(axis)
            );
        }
    }
    println!("\ndepth cut at x = 0, 800 nm");
    println!("   y µm     n_x       n_y");
    for k in 0..=12 {
        let y = 2.0 * k as f64;
        println!(
            "  {y:5.1}  {:.5}  {:.5}",
            wg.refractive_index(Axis::X, 800.0, 0.0, y)?,
            wg.refractive_index(Axis::Y, 800.0, 0.0, y)?
        );
    }
    Ok(())
}
