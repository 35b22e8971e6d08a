use std::sync::Arc;

use num_complex::Complex64;

use crate::fem::{AssembledProblem, Mesh};
use crate::materials::Polarization;
use crate::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Nodal field maps of one mode.
///
/// `h` is the magnetic field. `d` holds `ε·e` per axis, which is continuous
/// where `e` is not; the electric field on an element is `d / ε` with the
/// element's centroid permittivity.
#[derive(Debug, Clone)]
pub struct ModeFields {
    pub mesh: Arc<Mesh>,
    pub element_eps: Arc<Vec<[f64; 3]>>,
    pub h: [Vec<Complex64>; 3],
    pub d: [Vec<Complex64>; 3],
}

impl ModeFields {
    /// `e` at the corners of triangle `t`, per axis.
    pub fn e_on_element(&self, t: usize) -> [[Complex64; 3]; 3] {
        let tri = self.mesh.triangles[t];
        let eps = self.element_eps[t];
        std::array::from_fn(|axis| tri.map(|k| self.d[axis][k] / eps[axis]))
    }

    /// Electric field at `(x, y)` by linear interpolation on the containing
    /// element; zero outside the mesh.
    pub fn e_at(&self, x: f64, y: f64) -> [Complex64; 3] {
        match self.mesh.locate(x, y) {
            Some((t, w)) => {
                let e = self.e_on_element(t);
                std::array::from_fn(|a| (0..3).map(|k| e[a][k] * w[k]).sum())
            }
            None => [Complex64::new(0.0, 0.0); 3],
        }
    }

    /// `∫ Re(e × h*)·ẑ dA`.
    pub fn power(&self) -> f64 {
        let mut p = 0.0;
        for t in 0..self.mesh.triangles.len() {
            let tri = self.mesh.triangles[t];
            let eps = self.element_eps[t];
            let area = self.mesh.areas[t];
            let ex_hy = product_integral(area, tri.map(|k| self.d[0][k]), tri.map(|k| self.h[1][k].conj()));
            let ey_hx = product_integral(area, tri.map(|k| self.d[1][k]), tri.map(|k| self.h[0][k].conj()));
            p += ex_hy.re / eps[0] - ey_hx.re / eps[1];
        }
        p
    }

    /// `∫ ε|e|² dA` and `∫ |h|² dA`.
    pub fn energies(&self) -> (f64, f64) {
        let (mut we, mut wh) = (0.0, 0.0);
        for t in 0..self.mesh.triangles.len() {
            let tri = self.mesh.triangles[t];
            let eps = self.element_eps[t];
            let area = self.mesh.areas[t];
            for a in 0..3 {
                let d = tri.map(|k| self.d[a][k]);
                let h = tri.map(|k| self.h[a][k]);
                we += product_integral(area, d, d.map(|v| v.conj())).re / eps[a];
                wh += product_integral(area, h, h.map(|v| v.conj())).re;
            }
        }
        (we, wh)
    }

    fn scale(&mut self, s: Complex64) {
        for comp in self.h.iter_mut().chain(self.d.iter_mut()) {
            for v in comp.iter_mut() {
                *v *= s;
            }
        }
    }
}

/// Exact `∫ f g dA` over a triangle for linear `f`, `g` given at the corners.
pub fn product_integral(area: f64, f: [Complex64; 3], g: [Complex64; 3]) -> Complex64 {
    let diag: Complex64 = (0..3).map(|k| f[k] * g[k]).sum();
    let sf: Complex64 = f.iter().sum();
    let sg: Complex64 = g.iter().sum();
    (diag + sf * sg) * (area / 12.0)
}

/// Exact `∫ f g h dA` over a triangle for linear `f`, `g`, `h`.
pub fn triple_integral(area: f64, f: [Complex64; 3], g: [Complex64; 3], h: [Complex64; 3]) -> Complex64 {
    let mut s = Complex64::new(0.0, 0.0);
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                let w = match (i == j, j == k, i == k) {
                    (true, true, _) => 6.0,
                    (false, false, false) => 1.0,
                    _ => 2.0,
                };
                s += f[i] * g[j] * h[k] * w;
            }
        }
    }
    s * (area / 60.0)
}

/// Area-weighted average of the constant element gradients around each node.
fn recovered_gradient(mesh: &Mesh, u: &[Complex64]) -> [Vec<Complex64>; 2] {
    let n = mesh.node_count();
    let mut gx = vec![Complex64::new(0.0, 0.0); n];
    let mut gy = vec![Complex64::new(0.0, 0.0); n];
    let mut wsum = vec![0.0; n];
    for (t, tri) in mesh.triangles.iter().enumerate() {
        let g = mesh.shape_gradients(t);
        let (mut ex, mut ey) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
        for k in 0..3 {
            ex += u[tri[k]] * g[k][0];
            ey += u[tri[k]] * g[k][1];
        }
        let a = mesh.areas[t];
        for &k in tri {
            gx[k] += ex * a;
            gy[k] += ey * a;
            wsum[k] += a;
        }
    }
    for k in 0..n {
        gx[k] /= wsum[k];
        gy[k] /= wsum[k];
    }
    [gx, gy]
}

/// Completes the semi-vectorial solution to all six field components.
///
/// The dominant transverse `h` is the eigenvector (`h_y` for quasi-TE, `h_x`
/// for quasi-TM), the other transverse component is zero,
/// `h_z = i(∂h_x/∂x + ∂h_y/∂y)/β` and `e = ε⁻¹ i∇×h / k₀`.
pub fn reconstruct_fields(problem: &AssembledProblem, beta: f64, vector: &[f64]) -> Result<ModeFields> {
    if !(beta.abs() > 1e-9 * problem.k0) {
        return Err(Error::numerical(
            "modes",
            "reconstruct_fields",
            format!("propagation constant {beta} too close to zero"),
        ));
    }
    let mesh = problem.mesh.clone();
    let n = mesh.node_count();
    let zero = vec![Complex64::new(0.0, 0.0); n];
    let u: Vec<Complex64> = problem.to_nodal(vector).into_iter().map(|v| Complex64::new(v, 0.0)).collect();
    let (hx, hy) = match problem.polarization {
        Polarization::Te => (zero.clone(), u),
        Polarization::Tm => (u, zero.clone()),
    };
    let [dhx_dx, dhx_dy] = recovered_gradient(&mesh, &hx);
    let [dhy_dx, dhy_dy] = recovered_gradient(&mesh, &hy);
    let hz: Vec<Complex64> = (0..n).map(|k| I * (dhx_dx[k] + dhy_dy[k]) / beta).collect();
    let [dhz_dx, dhz_dy] = recovered_gradient(&mesh, &hz);
    let k0 = problem.k0;
    let dx: Vec<Complex64> = (0..n).map(|k| (I * dhz_dy[k] + beta * hy[k]) / k0).collect();
    let dy: Vec<Complex64> = (0..n).map(|k| (-I * dhz_dx[k] - beta * hx[k]) / k0).collect();
    let dz: Vec<Complex64> = (0..n).map(|k| I * (dhy_dx[k] - dhx_dy[k]) / k0).collect();
    Ok(ModeFields {
        mesh,
        element_eps: Arc::new(problem.element_eps.clone()),
        h: [hx, hy, hz],
        d: [dx, dy, dz],
    })
}

/// Scales to unit power and rotates the phase so the dominant electric
/// component is real and positive where its magnitude peaks. Applying it a
/// second time changes nothing.
pub fn normalize(fields: &mut ModeFields, pol: Polarization) -> Result<()> {
    let p = fields.power();
    if !(p > 0.0 && p.is_finite()) {
        return Err(Error::numerical("modes", "normalize", format!("mode power {p} is not positive")));
    }
    let s = 1.0 / p.sqrt();
    if (s - 1.0).abs() > 4.0 * f64::EPSILON {
        fields.scale(Complex64::new(s, 0.0));
    }
    let dom = &fields.d[pol.electric_axis().index()];
    let (kmax, _) = dom
        .iter()
        .enumerate()
        .fold((0, 0.0f64), |(bk, bv), (k, v)| if v.norm() > bv { (k, v.norm()) } else { (bk, bv) });
    let v = dom[kmax];
    if v.im != 0.0 || v.re < 0.0 {
        let phase = v.conj() / v.norm();
        fields.scale(phase);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(v: f64) -> Complex64 {
        Complex64::new(v, 0.0)
    }

    #[test]
    fn triangle_moments() {
        let one = [c(1.0); 3];
        assert!((product_integral(2.0, one, one).re - 2.0).abs() < 1e-15);
        assert!((triple_integral(2.0, one, one, one).re - 2.0).abs() < 1e-15);
        // ∫ λ1^a λ2^b λ3^c = 2A a!b!c!/(a+b+c+2)!
        let l1 = [c(1.0), c(0.0), c(0.0)];
        let l2 = [c(0.0), c(1.0), c(0.0)];
        let l3 = [c(0.0), c(0.0), c(1.0)];
        let a = 1.5;
        assert!((triple_integral(a, l1, l1, l1).re - 2.0 * a * 6.0 / 120.0).abs() < 1e-15);
        assert!((triple_integral(a, l1, l1, l2).re - 2.0 * a * 2.0 / 120.0).abs() < 1e-15);
        assert!((triple_integral(a, l1, l2, l3).re - 2.0 * a / 120.0).abs() < 1e-15);
        assert!((product_integral(a, l1, l2).re - 2.0 * a / 24.0).abs() < 1e-15);
    }
}
