//! Every allowed type II process under equal excitation of all guided pump
//! modes, with its phase-matched wavelength and relative strength.
//!
//! cargo run --release --example process_table

use qpmshg::scan::{process_table, RelativePowerMetric, Study};
use qpmshg::shg::{wavelength_grid, BandPlan, PumpSpec, SpectrumOptions};

fn main() -> qpmshg::Result<()> {
    let pump = PumpSpec::flat(800.0, 40.0);
    let mut study = Study::default();
    study.plan = BandPlan {
        sh_count: Some(12),
        ..BandPlan::default()
    };
    let grid = wavelength_grid(391.0, 409.0, 1801);
    let opts = SpectrumOptions {
        pump_points: 512,
        ..SpectrumOptions::default()
    };
    let table = process_table(&study, &pump, &grid, RelativePowerMetric::PeakIntensity, &opts)?;
    println!("{:<12} {:>9} {:>8} {:>8}", "process", "λ₂ nm", "P_rel", "√P_rel");
    for r in table.rows.iter().take(12) {
        println!(
            "{:<12} {:>9.2} {:>8.3} {:>8.3}",
            r.triple.modes_string(),
            r.lambda2_nm,
            r.rel_power,
            r.rel_power.sqrt()
        );
    }
    println!("({} processes in total)", table.rows.len());
    Ok(())
}
