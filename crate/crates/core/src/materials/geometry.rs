use serde::{Deserialize, Serialize};

use super::{Axis, DispersionModel};
use crate::{Error, Result};

/// Rectangular computational window in the transverse plane, µm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Window {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl Default for Window {
    fn default() -> Self {
        Self {
            x_min: -15.0,
            x_max: 15.0,
            y_min: -5.0,
            y_max: 40.0,
        }
    }
}

impl Window {
    pub fn width(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn height(&self) -> f64 {
        self.y_max - self.y_min
    }

    /// Window grown by `factor` about the core column and the air interface.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            x_min: self.x_min * factor,
            x_max: self.x_max * factor,
            y_min: self.y_min * factor,
            y_max: self.y_max * factor,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WaveguideGeometry {
    /// Channel width `w`, µm.
    pub width_um: f64,
    /// Diffusion depth `h`, µm.
    pub depth_um: f64,
    /// Device length `L`, mm.
    pub length_mm: f64,
    pub window: Window,
}

impl Default for WaveguideGeometry {
    fn default() -> Self {
        Self {
            width_um: 5.0,
            depth_um: 10.0,
            length_mm: 10.5,
            window: Window::default(),
        }
    }
}

impl WaveguideGeometry {
    pub fn new(width_um: f64, depth_um: f64, length_mm: f64, window: Window) -> Result<Self> {
        let g = Self {
            width_um,
            depth_um,
            length_mm,
            window,
        };
        g.validate(DepthProfile::Erfc)?;
        Ok(g)
    }

    pub fn length_um(&self) -> f64 {
        self.length_mm * 1e3
    }

    pub fn with_width(&self, width_um: f64) -> Self {
        Self {
            width_um,
            ..self.clone()
        }
    }

    pub fn with_depth(&self, depth_um: f64) -> Self {
        Self {
            depth_um,
            ..self.clone()
        }
    }

    /// Checks positivity and that the window holds the core column, a band of
    /// cover above it and the bulk of the diffused layer below.
    pub fn validate(&self, profile: DepthProfile) -> Result<()> {
        let w = &self.window;
        if !(self.width_um > 0.0 && self.depth_um > 0.0 && self.length_mm > 0.0) {
            return Err(Error::Config(format!(
                "geometry needs w, h, L > 0 (got w={}, h={}, L={})",
                self.width_um, self.depth_um, self.length_mm
            )));
        }
        let needed_depth = profile.extent_factor() * self.depth_um;
        if !(w.x_min < -0.5 * self.width_um && w.x_max > 0.5 * self.width_um) {
            return Err(Error::Config(format!(
                "window x-range [{}, {}] does not contain the core column of width {}",
                w.x_min, w.x_max, self.width_um
            )));
        }
        if !(w.y_min < 0.0) {
            return Err(Error::Config(format!(
                "window y_min = {} leaves no cover band above the surface",
                w.y_min
            )));
        }
        if !(w.y_max > needed_depth) {
            return Err(Error::Config(format!(
                "window y_max = {} does not reach {} µm below the surface",
                w.y_max, needed_depth
            )));
        }
        Ok(())
    }
}

/// Depth dependence `g(y/h)` of the index increase.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DepthProfile {
    /// `erfc(y/h)`: largest increase at the surface, decaying into the substrate.
    #[default]
    Erfc,
    /// `erfc(-y/h)` exactly as sometimes printed; grows from 1 to 2 with depth.
    ErfcNegated,
    /// Uniform increase for `0 ≤ y ≤ h`, none below.
    Step,
}

impl DepthProfile {
    pub fn eval(self, y_over_h: f64) -> f64 {
        match self {
            DepthProfile::Erfc => libm::erfc(y_over_h),
            DepthProfile::ErfcNegated => libm::erfc(-y_over_h),
            DepthProfile::Step => {
                if y_over_h <= 1.0 {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    /// Depth, in units of `h`, the window must extend below the surface.
    fn extent_factor(self) -> f64 {
        match self {
            DepthProfile::Erfc | DepthProfile::ErfcNegated => 2.5,
            DepthProfile::Step => 1.5,
        }
    }
}

/// What fills `y < 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Cover {
    /// Index 1 on every axis.
    #[default]
    Air,
    /// Bare substrate, turning the guide into a buried one.
    Substrate,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IndexProfile {
    pub depth: DepthProfile,
    pub cover: Cover,
}

/// Geometry, dispersion and profile shape together: everything needed to
/// evaluate `n_ξ(x, y; λ)`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Waveguide {
    pub geometry: WaveguideGeometry,
    pub dispersion: DispersionModel,
    pub profile: IndexProfile,
}

/// `n0` and `Δn` for all three axes frozen at one wavelength.
#[derive(Debug, Clone, Copy)]
pub struct IndexSampler {
    substrate: [f64; 3],
    increment: [f64; 3],
    half_width: f64,
    depth: f64,
    profile: IndexProfile,
}

impl IndexSampler {
    pub fn index(&self, axis: Axis, x: f64, y: f64) -> f64 {
        let i = axis.index();
        if y < 0.0 {
            return match self.profile.cover {
                Cover::Air => 1.0,
                Cover::Substrate => self.substrate[i],
            };
        }
        if x.abs() <= self.half_width {
            self.substrate[i] + self.increment[i] * self.profile.depth.eval(y / self.depth)
        } else {
            self.substrate[i]
        }
    }

    pub fn permittivity(&self, axis: Axis, x: f64, y: f64) -> f64 {
        let n = self.index(axis, x, y);
        n * n
    }

    pub fn substrate_index(&self, axis: Axis) -> f64 {
        self.substrate[axis.index()]
    }

    /// Largest index reachable on `axis` anywhere in the cross-section.
    pub fn peak_index(&self, axis: Axis) -> f64 {
        let i = axis.index();
        let g_max = match self.profile.depth {
            DepthProfile::ErfcNegated => 2.0,
            _ => 1.0,
        };
        self.substrate[i] + self.increment[i].max(0.0) * g_max
    }
}

impl Waveguide {
    pub fn new(geometry: WaveguideGeometry, dispersion: DispersionModel, profile: IndexProfile) -> Result<Self> {
        let wg = Self {
            geometry,
            dispersion,
            profile,
        };
        wg.validate()?;
        Ok(wg)
    }

    pub fn validate(&self) -> Result<()> {
        self.geometry.validate(self.profile.depth)?;
        self.dispersion.validate()
    }

    pub fn sampler(&self, lambda_nm: f64) -> Result<IndexSampler> {
        let mut substrate = [0.0; 3];
        let mut increment = [0.0; 3];
        for axis in Axis::ALL {
            substrate[axis.index()] = self.dispersion.substrate_index(axis, lambda_nm)?;
            increment[axis.index()] = self.dispersion.increment(axis, lambda_nm)?;
        }
        Ok(IndexSampler {
            substrate,
            increment,
            half_width: 0.5 * self.geometry.width_um,
            depth: self.geometry.depth_um,
            profile: self.profile,
        })
    }

    /// `n_ξ(x, y)` at wavelength `lambda_nm`; `x`, `y` in µm.
    pub fn refractive_index(&self, axis: Axis, lambda_nm: f64, x: f64, y: f64) -> Result<f64> {
        Ok(self.sampler(lambda_nm)?.index(axis, x, y))
    }

    /// Lines the mesh must follow so no element straddles a material jump.
    pub fn interface_lines(&self) -> (Vec<f64>, Vec<f64>) {
        let hw = 0.5 * self.geometry.width_um;
        let mut ys = vec![0.0];
        if self.profile.depth == DepthProfile::Step {
            ys.push(self.geometry.depth_um);
        }
        (vec![-hw, hw], ys)
    }

    pub fn with_geometry(&self, geometry: WaveguideGeometry) -> Self {
        Self {
            geometry,
            ..self.clone()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn surface_value_inside_core() {
        let wg = Waveguide::default();
        let n = wg.refractive_index(Axis::X, 800.0, 0.0, 0.0).unwrap();
        assert!((n - 1.76619).abs() < 1e-9);
    }

    #[test]
    fn outside_core_column_is_substrate() {
        let wg = Waveguide::default();
        let n = wg.refractive_index(Axis::X, 800.0, 3.0, 5.0).unwrap();
        assert!((n - 1.75719).abs() < 1e-9);
    }

    #[test]
    fn air_above_surface() {
        let wg = Waveguide::default();
        assert_eq!(wg.refractive_index(Axis::Y, 800.0, 0.0, -1.0).unwrap(), 1.0);
    }

    #[test]
    fn monotone_decay_into_substrate() {
        let wg = Waveguide::default();
        let s = wg.sampler(800.0).unwrap();
        for axis in Axis::ALL {
            let n0 = s.substrate_index(axis);
            let mut prev = s.index(axis, 0.0, 0.0);
            for k in 1..400 {
                let n = s.index(axis, 1.0, k as f64 * 0.1);
                assert!(n <= prev && n >= n0);
                prev = n;
            }
        }
    }

    #[test]
    fn negated_profile_grows_with_depth() {
        let mut wg = Waveguide::default();
        wg.profile.depth = DepthProfile::ErfcNegated;
        let s = wg.sampler(800.0).unwrap();
        assert!(s.index(Axis::X, 0.0, 20.0) > s.index(Axis::X, 0.0, 0.0));
        assert!((s.peak_index(Axis::X) - (1.75719 + 0.018)).abs() < 1e-9);
    }

    #[test]
    fn window_must_hold_the_core() {
        let mut g = WaveguideGeometry::default();
        g.window.x_max = 2.0;
        assert!(matches!(g.validate(DepthProfile::Erfc), Err(Error::Config(_))));
        let mut g = WaveguideGeometry::default();
        g.window.y_min = 0.0;
        assert!(g.validate(DepthProfile::Erfc).is_err());
        let mut g = WaveguideGeometry::default();
        g.width_um = 0.0;
        assert!(g.validate(DepthProfile::Erfc).is_err());
    }
}
