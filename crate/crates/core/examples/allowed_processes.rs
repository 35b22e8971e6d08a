//! Overlap coefficients of all first-order type II triples among the
//! lowest modes, showing which ones the mode symmetry forbids, and where the
//! allowed ones phase match.
//!
//! cargo run --release --example allowed_processes

use qpmshg::materials::ShgType;
use qpmshg::scan::{allowed_processes, find_phase_matched_wavelength, Study, OVERLAP_THRESHOLD};
use qpmshg::shg::BandPlan;

fn main() -> qpmshg::Result<()> {
    let mut study = Study::default();
    study.plan = BandPlan {
        pump_band_nm: (790.0, 810.0),
        samples: 5,
        pump_count: Some(4),
        sh_count: Some(6),
    };
    let basis = study.basis(&[ShgType::TypeII])?;
    let all = basis.enumerate(ShgType::TypeII, 1);
    let dmax = all
        .iter()
        .filter_map(|t| basis.overlap(t, &study.device).ok())
        .map(|o| o.value.norm())
        .fold(0.0, f64::max);
    let allowed = allowed_processes(&basis, &study.device, ShgType::TypeII, 1, OVERLAP_THRESHOLD)?;
    println!("{} triples, {} above {OVERLAP_THRESHOLD:.0e} of max |D|", all.len(), allowed.len());
    for (t, d) in &allowed {
        let pm = find_phase_matched_wavelength(t, &basis.tables, &study.device.poling, None);
        let at = pm.map_or("no root".to_string(), |p| format!("λ₂* = {:.2} nm", p.lambda2_nm));
        println!("  {}  |D|/max {:.3}  {at}", t.modes_string(), d.norm() / dmax);
    }
    Ok(())
}
