use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::beta::BetaTables;
use super::process::ProcessTriple;
use crate::fem::Mesh;
use crate::materials::{NonlinearTensor, PolingSpec};
use crate::modes::{triple_integral, GuidedMode};
use crate::{Error, Result};

/// Effective nonlinear coefficient of one process.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Overlap {
    /// `D`, pm/V per µm under unit-power mode normalization.
    pub value: Complex64,
    /// Pump fields were interpolated onto the SH mesh.
    pub resampled: bool,
}

fn same_mesh(a: &Arc<Mesh>, b: &Arc<Mesh>) -> bool {
    Arc::ptr_eq(a, b) || (a.xs == b.xs && a.ys == b.ys)
}

/// `e` of `mode` at the corners of triangle `t` of `target`.
fn corners_on(mode: &GuidedMode, target: &Mesh, t: usize, resample: bool) -> [[Complex64; 3]; 3] {
    if !resample {
        return mode.fields.e_on_element(t);
    }
    let tri = target.triangles[t];
    let c = target.centroids[t];
    let pts = tri.map(|k| target.nodes[k]);
    // pull corners a hair inside so they land in the matching source element
    let at = pts.map(|p| {
        let (x, y) = (p[0] + 1e-9 * (c[0] - p[0]), p[1] + 1e-9 * (c[1] - p[1]));
        mode.fields.e_at(x, y)
    });
    std::array::from_fn(|axis| std::array::from_fn(|k| at[k][axis]))
}

/// `D = d_M ∬ Σ d_ijk e_i^(2)* e_j^(b) e_k^(c) dA` with the tensor elements of
/// the triple's type and `d_M` the poling harmonic amplitude.
///
/// Fields are linear per element and the product is integrated exactly. If
/// the pump modes live on a different mesh they are interpolated onto the SH
/// mesh and the result is flagged.
pub fn overlap_coefficient(
    triple: &ProcessTriple,
    sh: &GuidedMode,
    pump_b: &GuidedMode,
    pump_c: &GuidedMode,
    tensor: &NonlinearTensor,
    poling: &PolingSpec,
) -> Result<Overlap> {
    let (idb, idc) = triple.pump_modes();
    let ida = triple.sh_mode();
    for (mode, id, what) in [(sh, ida, "SH"), (pump_b, idb, "pump b"), (pump_c, idc, "pump c")] {
        if mode.polarization != id.polarization || mode.label != id.label {
            return Err(Error::domain(
                "overlap_coefficient",
                format!(
                    "{what} mode is {}{} but the process needs {id}",
                    mode.polarization, mode.label
                ),
            ));
        }
    }
    for p in [pump_b, pump_c] {
        if (2.0 * sh.lambda_nm - p.lambda_nm).abs() > 0.05 * p.lambda_nm {
            return Err(Error::domain(
                "overlap_coefficient",
                format!("SH mode at {} nm is not near half of pump {} nm", sh.lambda_nm, p.lambda_nm),
            ));
        }
    }
    let d_m = poling.harmonic_amplitude(triple.harmonic)?;
    let mesh = &sh.fields.mesh;
    let rb = !same_mesh(mesh, &pump_b.fields.mesh);
    let rc = !same_mesh(mesh, &pump_c.fields.mesh);
    if rb || rc {
        tracing::warn!(target: "shg", process = %triple, "modes on different meshes, resampling pump fields");
    }
    let terms = tensor.contraction(triple.shg_type);
    let mut sum = Complex64::new(0.0, 0.0);
    for t in 0..mesh.triangles.len() {
        let ea = sh.fields.e_on_element(t);
        let eb = corners_on(pump_b, mesh, t, rb);
        let ec = corners_on(pump_c, mesh, t, rc);
        let area = mesh.areas[t];
        for &(i, j, k, d) in &terms {
            if d == 0.0 {
                continue;
            }
            let a = ea[i.index()].map(|v| v.conj());
            sum += triple_integral(area, a, eb[j.index()], ec[k.index()]) * d;
        }
    }
    Ok(Overlap {
        value: sum * d_m,
        resampled: rb || rc,
    })
}

/// `Δβ = β_a(ω₂) − β_b(ω₁) − β_c(ω₂−ω₁) − 2πM/Λ`, µm⁻¹.
pub fn phase_mismatch(
    triple: &ProcessTriple,
    omega2: f64,
    omega1: f64,
    tables: &BetaTables,
    poling: &PolingSpec,
) -> Result<f64> {
    let (b, c) = triple.pump_modes();
    Ok(tables.sh_beta(triple.sh_mode(), omega2)?
        - tables.pump_beta(b, omega1)?
        - tables.pump_beta(c, omega2 - omega1)?
        - poling.grating_wavevector(triple.harmonic))
}

/// `Γ = i(exp(−iΔβL) − 1)/Δβ = L e^{−iΔβL/2} sinc(ΔβL/2)`, continuous at `Δβ = 0`.
pub fn coupling_gamma(delta_beta: f64, length_um: f64) -> Complex64 {
    let half = 0.5 * delta_beta * length_um;
    let sinc = if half == 0.0 { 1.0 } else { half.sin() / half };
    Complex64::from_polar(length_um * sinc, -half)
}
