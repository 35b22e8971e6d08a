use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::materials::{PolingSpec, ShgType, Waveguide};
use crate::modes::{ModeLabel, ModeSolver};
use crate::shg::{
    coupling_gamma, fwhm_around, nm_from_omega, omega_from_nm, phase_mismatch, wavelength_grid, BetaTables, ProcessTriple,
};
use crate::{Error, Result};

/// Root bound on `|Δβ|`, µm⁻¹.
pub const ROOT_TOLERANCE: f64 = 1e-6;

/// Degenerate-pump phase-matching point of one process.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseMatch {
    pub triple: ProcessTriple,
    pub lambda2_nm: f64,
    /// `Δβ` at the returned point, µm⁻¹.
    pub residual: f64,
    /// `dΔβ/dλ₂`, µm⁻¹ per nm.
    pub slope_per_nm: f64,
    /// `Δβ` vanishes across the whole bracket; `lambda2_nm` is its midpoint.
    pub degenerate: bool,
}

/// `Δβ(λ₂)` with both pump photons at `2λ₂`.
pub fn degenerate_mismatch(triple: &ProcessTriple, lambda2_nm: f64, tables: &BetaTables, poling: &PolingSpec) -> Result<f64> {
    let w2 = omega_from_nm(lambda2_nm);
    phase_mismatch(triple, w2, 0.5 * w2, tables, poling)
}

/// SH wavelengths, nm, at which every curve of `triple` is tabulated under
/// degenerate pumping.
pub fn table_bracket(triple: &ProcessTriple, tables: &BetaTables) -> Result<(f64, f64)> {
    let (b, c) = triple.pump_modes();
    let missing = |what: &str| Error::domain("table_bracket", format!("no β table for {what} of {triple}"));
    let a = tables.sh_curve(triple.sh_mode()).ok_or_else(|| missing("SH mode"))?;
    let pb = tables.pump_curve(b).ok_or_else(|| missing("pump b"))?;
    let pc = tables.pump_curve(c).ok_or_else(|| missing("pump c"))?;
    let lo = a.omega_range.0.max(2.0 * pb.omega_range.0).max(2.0 * pc.omega_range.0);
    let hi = a.omega_range.1.min(2.0 * pb.omega_range.1).min(2.0 * pc.omega_range.1);
    if !(hi > lo) {
        return Err(Error::domain("table_bracket", format!("SH and pump tables of {triple} do not overlap")));
    }
    Ok((nm_from_omega(hi), nm_from_omega(lo)))
}

/// Root of the degenerate-pump mismatch inside `bracket_nm` (defaults to the
/// table coverage). The bracket is sampled for sign changes; the change
/// nearest the bracket center is refined by bisection.
pub fn find_phase_matched_wavelength(
    triple: &ProcessTriple,
    tables: &BetaTables,
    poling: &PolingSpec,
    bracket_nm: Option<(f64, f64)>,
) -> Result<PhaseMatch> {
    let cover = table_bracket(triple, tables)?;
    let (lo, hi) = match bracket_nm {
        Some((a, b)) => (a.max(cover.0), b.min(cover.1)),
        None => cover,
    };
    if !(hi > lo) {
        return Err(Error::NotPhaseMatchable { lo_nm: lo, hi_nm: hi });
    }
    let f = |l: f64| degenerate_mismatch(triple, l, tables, poling);
    let n = 200;
    let xs: Vec<f64> = (0..=n).map(|k| lo + (hi - lo) * k as f64 / n as f64).collect();
    let ys: Vec<f64> = xs.iter().map(|&x| f(x)).collect::<Result<_>>()?;
    if ys.iter().all(|y| y.abs() < ROOT_TOLERANCE) {
        let mid = 0.5 * (lo + hi);
        return Ok(PhaseMatch {
            triple: *triple,
            lambda2_nm: mid,
            residual: f(mid)?,
            slope_per_nm: 0.0,
            degenerate: true,
        });
    }
    let mid = 0.5 * (lo + hi);
    let cell = (0..n)
        .filter(|&k| ys[k] == 0.0 || ys[k].signum() != ys[k + 1].signum())
        .min_by(|&p, &q| (xs[p] - mid).abs().total_cmp(&(xs[q] - mid).abs()))
        .ok_or(Error::NotPhaseMatchable { lo_nm: lo, hi_nm: hi })?;
    let (mut a, mut b) = (xs[cell], xs[cell + 1]);
    let (mut fa, fb) = (ys[cell], ys[cell + 1]);
    let root = if fa == 0.0 {
        a
    } else if fb == 0.0 {
        b
    } else {
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            let fm = f(m)?;
            if fm == 0.0 || b - a < 1e-12 * m {
                a = m;
                b = m;
                break;
            }
            if fm.signum() == fa.signum() {
                a = m;
                fa = fm;
            } else {
                b = m;
            }
        }
        0.5 * (a + b)
    };
    let residual = f(root)?;
    if residual.abs() >= ROOT_TOLERANCE {
        return Err(Error::numerical(
            "scan",
            "find_phase_matched_wavelength",
            format!("bisection stalled at |Δβ| = {:.3e}", residual.abs()),
        ));
    }
    let h = 1e-4;
    let slope = (f((root + h).min(hi))? - f((root - h).max(lo))?) / ((root + h).min(hi) - (root - h).max(lo));
    Ok(PhaseMatch {
        triple: *triple,
        lambda2_nm: root,
        residual,
        slope_per_nm: slope,
        degenerate: false,
    })
}

/// FWHM, nm, of `|Γ(Δβ(λ₂))|²` under degenerate pumping around the root:
/// the line width set by the longitudinal phase matching alone.
pub fn ideal_line_width(pm: &PhaseMatch, tables: &BetaTables, poling: &PolingSpec, length_um: f64) -> Result<f64> {
    if pm.degenerate || pm.slope_per_nm == 0.0 {
        return Err(Error::domain("ideal_line_width", format!("{} has no isolated root", pm.triple)));
    }
    if !(length_um > 0.0) {
        return Err(Error::domain("ideal_line_width", format!("length must be positive, got {length_um}")));
    }
    // sinc² halves at ΔβL/2 ≈ 1.3916
    let guess = 4.0 * 1.391_557 / (length_um * pm.slope_per_nm.abs());
    let cover = table_bracket(&pm.triple, tables)?;
    let lo = (pm.lambda2_nm - 2.0 * guess).max(cover.0);
    let hi = (pm.lambda2_nm + 2.0 * guess).min(cover.1);
    let n = 4001;
    let xs = wavelength_grid(lo, hi, n);
    let ys: Vec<f64> = xs
        .iter()
        .map(|&l| Ok(coupling_gamma(degenerate_mismatch(&pm.triple, l, tables, poling)?, length_um).norm_sqr()))
        .collect::<Result<_>>()?;
    let imax = (0..n).fold(0, |b, i| if ys[i] > ys[b] { i } else { b });
    fwhm_around(&xs, &ys, imax)
        .ok_or_else(|| Error::numerical("scan", "ideal_line_width", "line not resolved inside the table coverage"))
}

/// `dλ₂*/dΛ` from the implicit function theorem, nm/µm.
pub fn implicit_period_slope(pm: &PhaseMatch, poling: &PolingSpec) -> f64 {
    let m = pm.triple.harmonic as f64;
    // Δβ contains −2πM/Λ, so ∂Δβ/∂Λ = 2πM/Λ²
    -(2.0 * PI * m / poling.period_um.powi(2)) / pm.slope_per_nm
}

/// Harmonic each type is designed to run on: II first, 0 second, I third.
pub fn designated_harmonic(t: ShgType) -> u32 {
    match t {
        ShgType::TypeII => 1,
        ShgType::Type0 => 2,
        ShgType::TypeI => 3,
    }
}

/// Poling period that phase matches the fundamental-mode triple of a type.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimalPeriod {
    pub shg_type: ShgType,
    pub lambda1_nm: f64,
    pub harmonic: u32,
    /// `β_a(λ₁/2) − β_b(λ₁) − β_c(λ₁)`, µm⁻¹.
    pub mismatch: f64,
    /// `2π / mismatch`, µm.
    pub first_order_um: f64,
    /// `2πM / mismatch`, µm.
    pub period_um: f64,
}

/// Solves the fundamental modes at `λ₁` and `λ₁/2` and returns the period
/// that cancels their mismatch through the type's designated harmonic.
pub fn optimal_poling_period(
    shg_type: ShgType,
    lambda1_nm: f64,
    solver: &ModeSolver,
    wg: &Waveguide,
) -> Result<OptimalPeriod> {
    let mesh = solver.mesh(wg)?;
    let (pb, pc) = shg_type.pump_polarizations();
    let beta_of = |lambda: f64, pol| -> Result<f64> {
        let set = solver.solve_on(mesh.clone(), wg, lambda, pol, Some(4))?;
        set.find(ModeLabel::FUNDAMENTAL).map(|m| m.beta).ok_or_else(|| {
            Error::domain(
                "optimal_poling_period",
                format!("no guided {pol} (0,0) mode at {lambda} nm"),
            )
        })
    };
    let b1 = beta_of(lambda1_nm, pb)?;
    let b2 = if pc == pb { b1 } else { beta_of(lambda1_nm, pc)? };
    let a = beta_of(0.5 * lambda1_nm, shg_type.sh_polarization())?;
    let mismatch = a - b1 - b2;
    if !(mismatch > 0.0) {
        return Err(Error::domain(
            "optimal_poling_period",
            format!("mismatch {mismatch:.4e} µm⁻¹ is not positive, no QPM period exists"),
        ));
    }
    let harmonic = designated_harmonic(shg_type);
    Ok(OptimalPeriod {
        shg_type,
        lambda1_nm,
        harmonic,
        mismatch,
        first_order_um: 2.0 * PI / mismatch,
        period_um: 2.0 * PI * harmonic as f64 / mismatch,
    })
}
