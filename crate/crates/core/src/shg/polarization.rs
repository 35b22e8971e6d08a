use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Peak conversion weights of the three process types.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TypeWeights {
    pub type0: f64,
    pub type1: f64,
    pub type2: f64,
}

impl Default for TypeWeights {
    fn default() -> Self {
        Self {
            type0: 1.0,
            type1: 1.0,
            type2: 1.0,
        }
    }
}

/// SH power in each polarization against pump polarization angle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolarizationResponse {
    pub alpha_deg: Vec<f64>,
    pub te: Vec<f64>,
    pub tm: Vec<f64>,
}

/// Pump linearly polarized at `α` from the TE axis: TE amplitude `cos α`, TM
/// amplitude `sin α`. TE SH comes from type II only (`∝ cos²α sin²α`); TM SH
/// adds types 0 and I incoherently (`w₀ sin⁴α + w_I cos⁴α`) since their lines
/// sit at different wavelengths. Each curve is scaled to peak 1 over the given
/// angles unless it is identically zero.
pub fn polarization_response(alpha_deg: &[f64], weights: &TypeWeights) -> Result<PolarizationResponse> {
    for (name, w) in [("type0", weights.type0), ("type1", weights.type1), ("type2", weights.type2)] {
        if !(w >= 0.0 && w.is_finite()) {
            return Err(Error::domain("polarization_response", format!("weight {name} must be >= 0, got {w}")));
        }
    }
    let (mut te, mut tm): (Vec<f64>, Vec<f64>) = alpha_deg
        .iter()
        .map(|a| {
            let (s, c) = a.to_radians().sin_cos();
            (weights.type2 * c * c * s * s, weights.type0 * s.powi(4) + weights.type1 * c.powi(4))
        })
        .unzip();
    for v in [&mut te, &mut tm] {
        let peak = v.iter().copied().fold(0.0, f64::max);
        if peak > 0.0 {
            v.iter_mut().for_each(|x| *x /= peak);
        }
    }
    Ok(PolarizationResponse {
        alpha_deg: alpha_deg.to_vec(),
        te,
        tm,
    })
}

/// Unnormalized powers at a single angle, `(P_TE, P_TM)`.
pub fn polarization_powers(alpha_deg: f64, weights: &TypeWeights) -> (f64, f64) {
    let (s, c) = alpha_deg.to_radians().sin_cos();
    (
        weights.type2 * c * c * s * s,
        weights.type0 * s.powi(4) + weights.type1 * c.powi(4),
    )
}
