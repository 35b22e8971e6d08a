use std::f64::consts::PI;

use crate::materials::Polarization;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlabLayer {
    pub thickness_um: f64,
    pub index: f64,
}

/// Planar stack between two semi-infinite half spaces, listed from the cover
/// side to the substrate side.
#[derive(Debug, Clone, PartialEq)]
pub struct SlabStack {
    pub cover_index: f64,
    pub layers: Vec<SlabLayer>,
    pub substrate_index: f64,
}

impl SlabStack {
    pub fn symmetric(core_index: f64, cladding_index: f64, thickness_um: f64) -> Self {
        Self {
            cover_index: cladding_index,
            layers: vec![SlabLayer {
                thickness_um,
                index: core_index,
            }],
            substrate_index: cladding_index,
        }
    }

    /// Graded layer `n0 + Δn·g(t/h)` cut into `sublayers` uniform slices over
    /// depth `extent_um`, each taking the profile value at its midpoint.
    pub fn graded(
        cover_index: f64,
        n0: f64,
        dn: f64,
        h_um: f64,
        extent_um: f64,
        sublayers: usize,
        g: impl Fn(f64) -> f64,
    ) -> Self {
        let d = extent_um / sublayers as f64;
        let layers = (0..sublayers)
            .map(|k| SlabLayer {
                thickness_um: d,
                index: n0 + dn * g((k as f64 + 0.5) * d / h_um),
            })
            .collect();
        Self {
            cover_index,
            layers,
            substrate_index: n0,
        }
    }

    fn max_index(&self) -> f64 {
        self.layers.iter().map(|l| l.index).fold(f64::NEG_INFINITY, f64::max)
    }

    fn floor_index(&self) -> f64 {
        self.cover_index.max(self.substrate_index)
    }
}

/// Transverse resonance function: zero exactly at guided-mode indices.
///
/// The field `φ` and `φ'/p` are carried through the stack with `p = 1` for TE
/// (scalar continuity) and `p = n²` for TM.
fn resonance(stack: &SlabStack, k0: f64, n_eff: f64, pol: Polarization) -> f64 {
    let weight = |n: f64| match pol {
        Polarization::Te => 1.0,
        Polarization::Tm => n * n,
    };
    let b2 = (k0 * n_eff).powi(2);
    let gamma_c = (b2 - (k0 * stack.cover_index).powi(2)).max(0.0).sqrt();
    let gamma_s = (b2 - (k0 * stack.substrate_index).powi(2)).max(0.0).sqrt();
    let mut phi = 1.0;
    let mut psi = gamma_c / weight(stack.cover_index);
    for layer in &stack.layers {
        let p = weight(layer.index);
        let d = layer.thickness_um;
        let kappa2 = (k0 * layer.index).powi(2) - b2;
        let (nphi, npsi) = if kappa2 > 1e-14 {
            let k = kappa2.sqrt();
            let (s, c) = (k * d).sin_cos();
            (c * phi + p / k * s * psi, -k / p * s * phi + c * psi)
        } else if kappa2 < -1e-14 {
            let g = (-kappa2).sqrt();
            let (s, c) = ((g * d).sinh(), (g * d).cosh());
            (c * phi + p / g * s * psi, g / p * s * phi + c * psi)
        } else {
            (phi + p * d * psi, psi)
        };
        let scale = nphi.abs().max(npsi.abs()).max(f64::MIN_POSITIVE);
        phi = nphi / scale;
        psi = npsi / scale;
    }
    weight(stack.substrate_index) * psi + gamma_s * phi
}

/// All guided effective indices of `stack`, highest first.
pub fn slab_modes(stack: &SlabStack, lambda_nm: f64, pol: Polarization) -> Result<Vec<f64>> {
    if !(lambda_nm > 0.0) || stack.layers.is_empty() {
        return Err(Error::domain("slab_modes", "need λ > 0 and at least one layer"));
    }
    let k0 = 2.0 * PI / (lambda_nm * 1e-3);
    let hi = stack.max_index();
    let lo = stack.floor_index();
    if hi <= lo {
        return Ok(Vec::new());
    }
    // guided modes are roughly evenly spaced in the transverse wavenumber
    // q = sqrt(n_hi² - n²), so scan uniformly in q with a density set by the
    // total transverse phase the stack can hold
    let phase: f64 = stack
        .layers
        .iter()
        .filter(|l| l.index > lo)
        .map(|l| k0 * (l.index * l.index - lo * lo).sqrt() * l.thickness_um)
        .sum();
    let samples = ((40.0 * phase / PI) as usize).max(4000);
    let q_max = (hi * hi - lo * lo).sqrt();
    let at = |k: usize| {
        let q = q_max * (k as f64 + 1e-6) / samples as f64;
        (hi * hi - q * q).max(lo * lo).sqrt()
    };
    let span = hi - lo;
    let mut roots = Vec::new();
    let mut prev_n = at(0);
    let mut prev_f = resonance(stack, k0, prev_n, pol);
    for k in 1..=samples {
        let n = if k == samples { lo + 1e-12 * span } else { at(k) };
        let f = resonance(stack, k0, n, pol);
        if prev_f == 0.0 {
            roots.push(prev_n);
        } else if prev_f.signum() != f.signum() && f != 0.0 {
            let (mut a, mut b, mut fa) = (prev_n, n, prev_f);
            while (a - b).abs() > 1e-12 {
                let m = 0.5 * (a + b);
                let fm = resonance(stack, k0, m, pol);
                if fm.signum() == fa.signum() {
                    a = m;
                    fa = fm;
                } else {
                    b = m;
                }
            }
            roots.push(0.5 * (a + b));
        }
        prev_n = n;
        prev_f = f;
    }
    Ok(roots)
}

/// Effective index of mode `order` (0 = fundamental), or `None` if that mode
/// is not guided.
pub fn slab_effective_index(stack: &SlabStack, lambda_nm: f64, pol: Polarization, order: usize) -> Result<Option<f64>> {
    Ok(slab_modes(stack, lambda_nm, pol)?.get(order).copied())
}

/// Separable rectangle estimate `n² = n_x² + n_y² - n_core²` from two
/// symmetric slabs of thickness `w` and `h`; `None` below cutoff.
pub fn marcatili_rect_index(
    w_um: f64,
    h_um: f64,
    core_index: f64,
    cladding_index: f64,
    lambda_nm: f64,
    (m, n): (usize, usize),
) -> Result<Option<f64>> {
    let pol = Polarization::Te;
    let nx = slab_effective_index(&SlabStack::symmetric(core_index, cladding_index, w_um), lambda_nm, pol, m)?;
    let ny = slab_effective_index(&SlabStack::symmetric(core_index, cladding_index, h_um), lambda_nm, pol, n)?;
    let (Some(nx), Some(ny)) = (nx, ny) else {
        return Ok(None);
    };
    let n2 = nx * nx + ny * ny - core_index * core_index;
    Ok((n2 > cladding_index * cladding_index).then(|| n2.sqrt()))
}
