//! Full type II spectrum for three channel widths, ideal and with 1 nm
//! broadening, under a flat 40 nm pump exciting all guided modes equally.
//!
//! cargo run --release --example geometry_spectra

use qpmshg::materials::Polarization;
use qpmshg::modes::ModeLabel;
use qpmshg::scan::{spectrum_vs_geometry, ScanParam, Study};
use qpmshg::shg::{local_maxima, wavelength_grid, BandPlan, ModeId, PumpSpec, SpectrumOptions};

fn main() -> qpmshg::Result<()> {
    let modes = [(0, 0), (0, 1), (1, 0)]
        .into_iter()
        .flat_map(|(m, n)| Polarization::BOTH.map(|p| ModeId::new(p, ModeLabel::new(m, n))));
    let pump = PumpSpec::flat(800.0, 40.0).with_uniform_modes(modes);
    let mut study = Study::default();
    study.plan = BandPlan {
        pump_count: Some(4),
        sh_count: Some(8),
        ..BandPlan::default()
    };
    let grid = wavelength_grid(391.0, 409.0, 1801);
    let opts = SpectrumOptions {
        pump_points: 512,
        ..SpectrumOptions::default()
    };
    let spectra = spectrum_vs_geometry(&study, ScanParam::Width, &[4.0, 5.0, 6.0], &pump, &grid, &opts, 1.0)?;
    for g in &spectra {
        let peaks: Vec<String> = local_maxima(&g.broadened.intensity, 0.2)
            .into_iter()
            .map(|i| format!("{:.1}", g.broadened.lambda2_nm[i]))
            .collect();
        println!(
            "w = {} µm: {} lines, strongest at {:.2} nm; broadened maxima at [{}] nm",
            g.value,
            g.ideal.triples.len(),
            g.ideal.peak_nm(),
            peaks.join(", ")
        );
    }
    Ok(())
}
