//! Shift of the phase-matched SH wavelength of five type II processes when
//! the poling period, channel width or diffusion depth is varied.
//!
//! cargo run --release --example sensitivity_scan [-- period|w|h]

use qpmshg::materials::ShgType;
use qpmshg::scan::{sensitivity_scan, ScanParam, Study};
use qpmshg::shg::{BandPlan, ProcessTriple};

fn main() -> qpmshg::Result<()> {
    let param: ScanParam = std::env::args().nth(1).as_deref().unwrap_or("period").parse()?;
    let triples = ["00+00->00", "00+00->01", "01+01->00", "01+01->01", "10+00->10"]
        .iter()
        .map(|s| ProcessTriple::parse(ShgType::TypeII, 1, s))
        .collect::<qpmshg::Result<Vec<_>>>()?;
    let mut study = Study::default();
    study.plan = BandPlan {
        pump_band_nm: (780.0, 820.0),
        samples: 7,
        pump_count: Some(4),
        sh_count: Some(6),
    };
    let values = match param {
        ScanParam::Period => vec![7.52, 7.57, 7.62, 7.67, 7.72],
        ScanParam::Width => vec![4.9, 5.0, 5.1],
        ScanParam::Depth => vec![8.0, 10.0, 12.0],
    };
    let r = sensitivity_scan(&study, param, &values, &triples)?;
    for (k, t) in triples.iter().enumerate() {
        let shifts: Vec<String> = r.shifts(k).iter().map(|s| s.map_or("--".into(), |v| format!("{v:+.3}"))).collect();
        println!(
            "{}  λ₂* {:>8}  spread {:>6}  shifts [{}]",
            t.modes_string(),
            r.nominal_lambda2_nm[k].map_or("--".into(), |v| format!("{v:.2}")),
            r.spread(k).map_or("--".into(), |v| format!("{v:.3}")),
            shifts.join(", ")
        );
    }
    Ok(())
}
