#![allow(dead_code)]

use std::sync::OnceLock;

use qpmshg::materials::ShgType;
use qpmshg::scan::Study;
use qpmshg::shg::{BandPlan, ModalBasis, ProcessTriple};

/// Nominal device with a narrow band and the few lowest modes.
pub fn small_study() -> Study {
    let mut s = Study::default();
    s.plan = BandPlan {
        pump_band_nm: (790.0, 810.0),
        samples: 5,
        pump_count: Some(4),
        sh_count: Some(6),
    };
    s
}

/// Type II, type 0 and type I modes of [`small_study`], solved once per
/// test binary.
pub fn small_basis() -> &'static (Study, ModalBasis) {
    static CELL: OnceLock<(Study, ModalBasis)> = OnceLock::new();
    CELL.get_or_init(|| {
        let s = small_study();
        let b = s
            .basis(&[ShgType::TypeII, ShgType::Type0])
            .expect("nominal modes");
        (s, b)
    })
}

pub fn triple(t: ShgType, m: u32, s: &str) -> ProcessTriple {
    ProcessTriple::parse(t, m, s).expect("triple")
}
