//! SH spectrum of the fundamental type II processes under a 10 nm Gaussian
//! pump exciting TE(0,0) and TM(0,0), ideal and with 1 nm broadening.
//! Writes `target/sh_spectrum.csv`.
//!
//! cargo run --release --example sh_spectrum

use std::fs::File;

use qpmshg::materials::ShgType;
use qpmshg::scan::Study;
use qpmshg::shg::{broaden, sh_spectrum, wavelength_grid, ProcessTriple, PumpSpec, SpectrumOptions};

fn main() -> qpmshg::Result<()> {
    let pump = PumpSpec::gaussian(797.0, 10.0);
    let mut study = Study::default().for_pump(&pump);
    study.plan.pump_count = Some(4);
    study.plan.sh_count = Some(6);
    let basis = study.basis(&[ShgType::TypeII])?;
    let triples = ["00+00->00", "00+00->01"]
        .iter()
        .map(|s| ProcessTriple::parse(ShgType::TypeII, 1, s))
        .collect::<qpmshg::Result<Vec<_>>>()?;
    let model = basis.model(&triples, &study.device)?;
    let grid = wavelength_grid(392.0, 404.0, 1201);
    let ideal = sh_spectrum(&model, &pump, &grid, &SpectrumOptions::default())?;
    let wide = broaden(&ideal, 1.0)?;
    println!("ideal: peak {:.3} nm, FWHM {:?} nm", ideal.peak_nm(), ideal.fwhm_nm());
    println!("1 nm broadened: peak {:.3} nm, FWHM {:?} nm", wide.peak_nm(), wide.fwhm_nm());
    println!(
        "integrated intensity {:.6e} -> {:.6e}",
        ideal.integrated_intensity(),
        wide.integrated_intensity()
    );
    std::fs::create_dir_all("target")?;
    ideal.write_csv(File::create("target/sh_spectrum.csv")?)?;
    Ok(())
}
