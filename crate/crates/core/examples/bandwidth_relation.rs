//! With phase matching switched off the SH of a Gaussian pump is its
//! autoconvolution, narrower by 2√2 in wavelength. The engine result is
//! checked against the direct-sum oracle.
//!
//! cargo run --release --example bandwidth_relation

use qpmshg::cli::autoconvolution_ratio;
use qpmshg::materials::ShgType;
use qpmshg::scan::Study;
use qpmshg::shg::{sh_spectrum, wavelength_grid, GammaModel, ProcessTriple, PumpSpec, SpectrumOptions};

fn main() -> qpmshg::Result<()> {
    let pump = PumpSpec::gaussian(800.0, 10.0);
    let mut study = Study::default().for_pump(&pump);
    study.plan.pump_count = Some(2);
    study.plan.sh_count = Some(2);
    let basis = study.basis(&[ShgType::TypeII])?;
    let t = ProcessTriple::parse(ShgType::TypeII, 1, "00+00->00")?;
    let model = basis.model(&[t], &study.device)?;
    let opts = SpectrumOptions {
        gamma: GammaModel::Flat,
        ..SpectrumOptions::default()
    };
    let grid = wavelength_grid(392.0, 408.0, 3201);
    let s = sh_spectrum(&model, &pump, &grid, &opts)?;
    let engine = s.fwhm_nm().expect("line resolved");
    let (oracle, ratio) = autoconvolution_ratio(&pump, 2001)?;
    println!("pump FWHM {:.2} nm", pump.fwhm_nm);
    println!("SH FWHM engine {engine:.4} nm, oracle {oracle:.4} nm");
    println!("Δλ₁/Δλ₂ = {:.4} (engine), {ratio:.4} (oracle), 2√2 = {:.4}", pump.fwhm_nm / engine, 2.0 * 2f64.sqrt());
    Ok(())
}
