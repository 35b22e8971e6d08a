use std::f64::consts::PI;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use super::mesh::Mesh;
use super::sparse::CsrMatrix;
use crate::materials::{Axis, DispersionModel, Polarization, Waveguide};
use crate::Result;

/// Free-space wavenumber `2π/λ` in µm⁻¹ for `λ` in nm.
pub fn wavenumber(lambda_nm: f64) -> f64 {
    2.0 * PI / (lambda_nm * 1e-3)
}

/// Coefficients of `c_xx ∂²h/∂x² + c_yy ∂²h/∂y² + k₀² p h = β² h` on one element.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElementCoefficients {
    pub c_xx: f64,
    pub c_yy: f64,
    pub potential: f64,
}

impl ElementCoefficients {
    /// `eps` holds `(ε_x, ε_y, ε_z)`.
    ///
    /// Quasi-TE modes are solved through the `h_y` equation, quasi-TM modes
    /// through the `h_x` equation.
    pub fn for_polarization(pol: Polarization, eps: [f64; 3]) -> Self {
        let [ex, ey, ez] = eps;
        match pol {
            Polarization::Te => Self {
                c_xx: ex / ez,
                c_yy: 1.0,
                potential: ex,
            },
            Polarization::Tm => Self {
                c_xx: 1.0,
                c_yy: ey / ez,
                potential: ey,
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AssemblyStats {
    pub dimension: usize,
    pub nnz_a: usize,
    pub nnz_b: usize,
    pub bandwidth: usize,
    /// `max|A - Aᵀ| / max|A|` before symmetrization.
    pub asymmetry: f64,
}

/// `A u = β² B u` over the interior nodes of a mesh.
#[derive(Debug, Clone)]
pub struct AssembledProblem {
    pub mesh: Arc<Mesh>,
    pub polarization: Polarization,
    pub lambda_nm: f64,
    pub k0: f64,
    pub a: CsrMatrix,
    pub b: CsrMatrix,
    /// Mesh node of each unknown.
    pub dof_nodes: Vec<usize>,
    /// Unknown of each mesh node, `None` on the Dirichlet boundary.
    pub node_dofs: Vec<Option<usize>>,
    /// `(ε_x, ε_y, ε_z)` sampled at each element centroid.
    pub element_eps: Vec<[f64; 3]>,
    /// Substrate index of the dominant polarization axis.
    pub substrate_index: f64,
    /// Largest index on the dominant polarization axis.
    pub peak_index: f64,
    pub stats: AssemblyStats,
}

impl AssembledProblem {
    pub fn dimension(&self) -> usize {
        self.dof_nodes.len()
    }

    /// Guided window `(β²_min, β²_max)` in µm⁻².
    pub fn guided_window(&self) -> (f64, f64) {
        let k0 = self.k0;
        ((self.substrate_index * k0).powi(2), (self.peak_index * k0).powi(2))
    }

    /// Spreads an interior vector onto all mesh nodes (zero on the boundary).
    pub fn to_nodal(&self, u: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.mesh.node_count()];
        for (&node, &v) in self.dof_nodes.iter().zip(u) {
            out[node] = v;
        }
        out
    }
}

/// Galerkin assembly with P1 triangles and centroid-sampled material.
pub fn assemble(mesh: Arc<Mesh>, pol: Polarization, lambda_nm: f64, wg: &Waveguide) -> Result<AssembledProblem> {
    DispersionModel::check_wavelength("assemble", lambda_nm)?;
    let sampler = wg.sampler(lambda_nm)?;
    let axis = pol.electric_axis();
    let mut problem = assemble_with(mesh, pol, wavenumber(lambda_nm), |x, y| {
        Axis::ALL.map(|ax| sampler.permittivity(ax, x, y))
    });
    problem.lambda_nm = lambda_nm;
    problem.substrate_index = sampler.substrate_index(axis);
    problem.peak_index = sampler.peak_index(axis);
    Ok(problem)
}

/// Assembly for an arbitrary permittivity `(x, y) → (ε_x, ε_y, ε_z)`.
///
/// The guided window is left at the range spanned by the sampled dominant
/// permittivity; [`assemble`] overrides it with substrate and peak values.
pub fn assemble_with<F>(mesh: Arc<Mesh>, pol: Polarization, k0: f64, eps: F) -> AssembledProblem
where
    F: Fn(f64, f64) -> [f64; 3] + Sync,
{
    let n_nodes = mesh.node_count();
    let mut node_dofs = vec![None; n_nodes];
    let mut dof_nodes = Vec::new();
    for (k, &b) in mesh.boundary.iter().enumerate() {
        if !b {
            node_dofs[k] = Some(dof_nodes.len());
            dof_nodes.push(k);
        }
    }
    let n = dof_nodes.len();
    let k0sq = k0 * k0;

    let element_eps: Vec<[f64; 3]> = mesh.centroids.par_iter().map(|c| eps(c[0], c[1])).collect();

    let locals: Vec<([usize; 3], [[f64; 3]; 3], [[f64; 3]; 3])> = (0..mesh.triangles.len())
        .into_par_iter()
        .map(|t| {
            let co = ElementCoefficients::for_polarization(pol, element_eps[t]);
            let g = mesh.shape_gradients(t);
            let area = mesh.areas[t];
            let mut ka = [[0.0; 3]; 3];
            let mut mb = [[0.0; 3]; 3];
            for i in 0..3 {
                for j in 0..3 {
                    let mass = area * if i == j { 2.0 } else { 1.0 } / 12.0;
                    let stiff = area * (co.c_xx * g[i][0] * g[j][0] + co.c_yy * g[i][1] * g[j][1]);
                    ka[i][j] = -stiff + k0sq * co.potential * mass;
                    mb[i][j] = mass;
                }
            }
            (mesh.triangles[t], ka, mb)
        })
        .collect();

    let mut ta = Vec::with_capacity(9 * locals.len());
    let mut tb = Vec::with_capacity(9 * locals.len());
    for (tri, ka, mb) in &locals {
        for i in 0..3 {
            let Some(r) = node_dofs[tri[i]] else { continue };
            for j in 0..3 {
                let Some(c) = node_dofs[tri[j]] else { continue };
                ta.push((r, c, ka[i][j]));
                tb.push((r, c, mb[i][j]));
            }
        }
    }
    let a_raw = CsrMatrix::from_triplets(n, n, ta);
    let b = CsrMatrix::from_triplets(n, n, tb);
    let asymmetry = a_raw.asymmetry();
    let a = if asymmetry > 0.0 { a_raw.symmetrized() } else { a_raw };

    let axis = pol.electric_axis().index();
    let (lo, hi) = element_eps
        .iter()
        .map(|e| e[axis].sqrt())
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), v| (lo.min(v), hi.max(v)));

    let stats = AssemblyStats {
        dimension: n,
        nnz_a: a.nnz(),
        nnz_b: b.nnz(),
        bandwidth: a.bandwidth(),
        asymmetry,
    };
    tracing::debug!(target: "fem", dimension = n, nnz = stats.nnz_a, bandwidth = stats.bandwidth, "assembled");
    AssembledProblem {
        mesh,
        polarization: pol,
        lambda_nm: 2.0 * PI / k0 * 1e3,
        k0,
        a,
        b,
        dof_nodes,
        node_dofs,
        element_eps,
        substrate_index: lo,
        peak_index: hi,
        stats,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem::{build_mesh, MeshParams};

    #[test]
    fn air_elements_are_isotropic() {
        let wg = Waveguide::default();
        let mesh = Arc::new(build_mesh(&wg, &MeshParams::with_resolution(1.0)).unwrap());
        let p = assemble(mesh.clone(), Polarization::Te, 800.0, &wg).unwrap();
        for (t, c) in mesh.centroids.iter().enumerate() {
            if c[1] < 0.0 {
                let co = ElementCoefficients::for_polarization(Polarization::Te, p.element_eps[t]);
                assert_eq!(co.c_xx, 1.0);
                assert_eq!(co.c_yy, 1.0);
                assert_eq!(co.potential, 1.0);
            }
        }
    }

    #[test]
    fn mass_matrix_is_positive_and_symmetric() {
        let wg = Waveguide::default();
        let mesh = Arc::new(build_mesh(&wg, &MeshParams::with_resolution(1.0)).unwrap());
        let p = assemble(mesh, Polarization::Tm, 800.0, &wg).unwrap();
        assert_eq!(p.b.asymmetry(), 0.0);
        assert_eq!(p.a.asymmetry(), 0.0);
        assert_eq!(p.stats.dimension, p.b.nrows());
        for r in 0..p.b.nrows() {
            let diag = p.b.get(r, r);
            let off: f64 = p.b.row(r).filter(|&(c, _)| c != r).map(|(_, v)| v.abs()).sum();
            assert!(diag > 0.0 && diag >= off - 1e-14);
        }
        // the sum of all mass entries is the interior-supported area integral of 1
        let total: f64 = (0..p.b.nrows()).flat_map(|r| p.b.row(r).map(|(_, v)| v)).sum();
        assert!(total > 0.0);
    }

    #[test]
    fn bandwidth_is_one_grid_row() {
        let wg = Waveguide::default();
        let mesh = Arc::new(build_mesh(&wg, &MeshParams::with_resolution(1.0)).unwrap());
        let nx = mesh.nx();
        let p = assemble(mesh, Polarization::Te, 800.0, &wg).unwrap();
        assert_eq!(p.stats.bandwidth, nx - 2 + 1);
    }

    #[test]
    fn guided_window_uses_dominant_axis() {
        let wg = Waveguide::default();
        let mesh = Arc::new(build_mesh(&wg, &MeshParams::with_resolution(1.0)).unwrap());
        let te = assemble(mesh.clone(), Polarization::Te, 800.0, &wg).unwrap();
        let tm = assemble(mesh, Polarization::Tm, 800.0, &wg).unwrap();
        assert!((te.substrate_index - 1.75719).abs() < 1e-9);
        assert!((te.peak_index - 1.76619).abs() < 1e-9);
        assert!((tm.substrate_index - 1.84546).abs() < 1e-9);
        assert!((tm.peak_index - 1.85846).abs() < 1e-9);
    }
}
