//! Solves the pump modes at 800 nm and writes the intensity of each TM mode
//! to `target/mode_profiles/TM_mn.csv` (grid layout, `y` rows).
//!
//! cargo run --release --example mode_profiles

use std::fs::File;

use qpmshg::materials::{Polarization, Waveguide};
use qpmshg::modes::{render_intensity, ModeSolver, RasterSpec};

fn main() -> qpmshg::Result<()> {
    let solver = ModeSolver::default();
    let wg = Waveguide::default();
    let set = solver.solve(&wg, 800.0, Polarization::Tm)?;
    let dir = std::path::Path::new("target/mode_profiles");
    std::fs::create_dir_all(dir)?;
    for m in &set.modes {
        let raster = render_intensity(&[(m, 1.0)], &RasterSpec::default());
        let (x, y, _) = raster.argmax();
        let name = format!("TM_{}{}.csv", m.label.m, m.label.n);
        raster.write_grid_csv(File::create(dir.join(&name))?)?;
        println!(
            "{}  n_eff {:.6}  residual {:.1e}  brightest at ({x:.1}, {y:.1}) µm  -> {name}",
            m.label, m.n_eff, m.residual
        );
    }
    Ok(())
}
