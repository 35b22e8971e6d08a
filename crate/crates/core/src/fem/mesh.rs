use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::materials::Waveguide;
use crate::{Error, Result};

/// Smallest triangle area accepted, µm².
pub const MIN_TRIANGLE_AREA: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MeshParams {
    /// Target edge length away from interfaces, µm.
    pub resolution_um: f64,
    /// Refinement factor applied near interfaces.
    pub grading: f64,
    /// Half width of the refined band around each interface, µm.
    pub band_um: f64,
}

impl Default for MeshParams {
    fn default() -> Self {
        Self {
            resolution_um: 0.25,
            grading: 4.0,
            band_um: 1.0,
        }
    }
}

impl MeshParams {
    pub fn with_resolution(resolution_um: f64) -> Self {
        Self {
            resolution_um,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.resolution_um > 0.0 && self.resolution_um.is_finite()) {
            return Err(Error::Config(format!("mesh resolution must be > 0, got {}", self.resolution_um)));
        }
        if !(self.grading >= 1.0) {
            return Err(Error::Config(format!("mesh grading must be >= 1, got {}", self.grading)));
        }
        if !(self.band_um >= 0.0) {
            return Err(Error::Config(format!("refinement band must be >= 0, got {}", self.band_um)));
        }
        Ok(())
    }
}

/// Triangulation of a tensor-product grid, split so that it is mirror
/// symmetric about `x = 0` whenever the grid itself is.
///
/// Nodes are numbered with `x` running fastest, so the node index is
/// `j * nx + i` for grid line `xs[i]`, `ys[j]`.
#[derive(Debug, Clone)]
pub struct Mesh {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    pub nodes: Vec<[f64; 2]>,
    pub triangles: Vec<[usize; 3]>,
    pub centroids: Vec<[f64; 2]>,
    pub areas: Vec<f64>,
    pub boundary: Vec<bool>,
}

impl Mesh {
    pub fn nx(&self) -> usize {
        self.xs.len()
    }

    pub fn ny(&self) -> usize {
        self.ys.len()
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn node_index(&self, i: usize, j: usize) -> usize {
        j * self.xs.len() + i
    }

    /// Mirror partner of node `k` under `x → -x`, if the grid is symmetric.
    pub fn mirror_node(&self, k: usize) -> Option<usize> {
        let nx = self.nx();
        let (i, j) = (k % nx, k / nx);
        let m = nx - 1 - i;
        ((self.xs[m] + self.xs[i]).abs() <= 1e-9).then(|| self.node_index(m, j))
    }

    pub fn is_x_symmetric(&self) -> bool {
        let n = self.xs.len();
        (0..n).all(|i| (self.xs[i] + self.xs[n - 1 - i]).abs() <= 1e-9)
    }

    /// Triangle containing `(x, y)` and its barycentric weights.
    pub fn locate(&self, x: f64, y: f64) -> Option<(usize, [f64; 3])> {
        let i = bracket(&self.xs, x)?;
        let j = bracket(&self.ys, y)?;
        let cell = j * (self.xs.len() - 1) + i;
        for t in [2 * cell, 2 * cell + 1] {
            let w = self.barycentric(t, x, y);
            if w.iter().all(|&v| v >= -1e-12) {
                return Some((t, w));
            }
        }
        None
    }

    pub fn barycentric(&self, t: usize, x: f64, y: f64) -> [f64; 3] {
        let [a, b, c] = self.triangles[t].map(|k| self.nodes[k]);
        let det = (b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]);
        let l1 = ((x - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (y - a[1])) / det;
        let l2 = ((b[0] - a[0]) * (y - a[1]) - (x - a[0]) * (b[1] - a[1])) / det;
        [1.0 - l1 - l2, l1, l2]
    }

    /// Gradients of the three hat functions on triangle `t`.
    pub fn shape_gradients(&self, t: usize) -> [[f64; 2]; 3] {
        let [p1, p2, p3] = self.triangles[t].map(|k| self.nodes[k]);
        let two_a = 2.0 * self.areas[t];
        [
            [(p2[1] - p3[1]) / two_a, (p3[0] - p2[0]) / two_a],
            [(p3[1] - p1[1]) / two_a, (p1[0] - p3[0]) / two_a],
            [(p1[1] - p2[1]) / two_a, (p2[0] - p1[0]) / two_a],
        ]
    }

    pub fn max_edge_length(&self) -> f64 {
        let dx = self.xs.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
        let dy = self.ys.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
        dx.hypot(dy)
    }

    /// Plain text dump: node and triangle counts, then one line per node
    /// (`x y boundary`) and one per triangle (three node indices).
    pub fn write_text<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "{} {}", self.nodes.len(), self.triangles.len())?;
        for (p, &b) in self.nodes.iter().zip(&self.boundary) {
            writeln!(out, "{} {} {}", p[0], p[1], u8::from(b))?;
        }
        for t in &self.triangles {
            writeln!(out, "{} {} {}", t[0], t[1], t[2])?;
        }
        Ok(())
    }
}

fn bracket(grid: &[f64], v: f64) -> Option<usize> {
    let n = grid.len();
    if n < 2 || v < grid[0] || v > grid[n - 1] {
        return None;
    }
    let i = grid.partition_point(|&g| g <= v);
    Some(i.clamp(1, n - 1) - 1)
}

/// Grid lines on `[a, b]` through every break point, spaced at most `fine`
/// within `band` of a break and at most `coarse` elsewhere.
pub fn graded_grid(a: f64, b: f64, breaks: &[f64], coarse: f64, fine: f64, band: f64) -> Vec<f64> {
    let mut knots = vec![a, b];
    for &q in breaks {
        for v in [q - band, q, q + band] {
            if v > a && v < b {
                knots.push(v);
            }
        }
    }
    knots.sort_by(f64::total_cmp);
    knots.dedup_by(|x, y| (*x - *y).abs() < 1e-9);
    let mut out = vec![a];
    for seg in knots.windows(2) {
        let (lo, hi) = (seg[0], seg[1]);
        let mid = 0.5 * (lo + hi);
        let near = breaks.iter().any(|&q| (mid - q).abs() < band);
        let step = if near { fine } else { coarse };
        let n = ((hi - lo) / step - 1e-9).ceil().max(1.0) as usize;
        for k in 1..=n {
            out.push(if k == n { hi } else { lo + (hi - lo) * k as f64 / n as f64 });
        }
    }
    out
}

/// Builds the interface-conforming mesh for `wg` with the given spacing.
pub fn build_mesh(wg: &Waveguide, params: &MeshParams) -> Result<Mesh> {
    params.validate()?;
    wg.geometry.validate(wg.profile.depth)?;
    let win = wg.geometry.window;
    let (x_breaks, y_breaks) = wg.interface_lines();
    let coarse = params.resolution_um;
    let fine = params.resolution_um / params.grading;
    let band = params.band_um;

    let xs = if (win.x_min + win.x_max).abs() <= 1e-12 {
        // build one half and mirror so the grid is exactly symmetric
        let pos: Vec<f64> = x_breaks.iter().copied().filter(|&q| q > 0.0).collect();
        let mut half = graded_grid(0.0, win.x_max, &pos, coarse, fine, band);
        let mut xs: Vec<f64> = half.iter().skip(1).rev().map(|&x| -x).collect();
        xs.append(&mut half);
        xs
    } else {
        graded_grid(win.x_min, win.x_max, &x_breaks, coarse, fine, band)
    };
    let ys = graded_grid(win.y_min, win.y_max, &y_breaks, coarse, fine, band);
    from_grid(xs, ys)
}

/// Triangulates a tensor grid; cells left of `x = 0` use the mirrored diagonal.
pub fn from_grid(xs: Vec<f64>, ys: Vec<f64>) -> Result<Mesh> {
    let (nx, ny) = (xs.len(), ys.len());
    if nx < 3 || ny < 3 {
        return Err(Error::Config("mesh needs at least 3 grid lines per direction".into()));
    }
    let mut nodes = Vec::with_capacity(nx * ny);
    let mut boundary = Vec::with_capacity(nx * ny);
    for (j, &y) in ys.iter().enumerate() {
        for (i, &x) in xs.iter().enumerate() {
            nodes.push([x, y]);
            boundary.push(i == 0 || j == 0 || i == nx - 1 || j == ny - 1);
        }
    }
    let id = |i: usize, j: usize| j * nx + i;
    let mut triangles = Vec::with_capacity(2 * (nx - 1) * (ny - 1));
    for j in 0..ny - 1 {
        for i in 0..nx - 1 {
            let (a, b, c, d) = (id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1));
            if xs[i] + xs[i + 1] >= 0.0 {
                triangles.push([a, b, c]);
                triangles.push([a, c, d]);
            } else {
                triangles.push([a, b, d]);
                triangles.push([b, c, d]);
            }
        }
    }
    let mut centroids = Vec::with_capacity(triangles.len());
    let mut areas = Vec::with_capacity(triangles.len());
    for (t, tri) in triangles.iter().enumerate() {
        let [p1, p2, p3] = tri.map(|k| nodes[k]);
        let area = 0.5 * ((p2[0] - p1[0]) * (p3[1] - p1[1]) - (p3[0] - p1[0]) * (p2[1] - p1[1]));
        if area <= MIN_TRIANGLE_AREA {
            return Err(Error::Config(format!("triangle {t} is degenerate (area {area:e} µm²)")));
        }
        areas.push(area);
        centroids.push([(p1[0] + p2[0] + p3[0]) / 3.0, (p1[1] + p2[1] + p3[1]) / 3.0]);
    }
    Ok(Mesh {
        xs,
        ys,
        nodes,
        triangles,
        centroids,
        areas,
        boundary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::materials::{Waveguide, Window};

    fn coarse() -> MeshParams {
        MeshParams {
            resolution_um: 0.5,
            grading: 2.0,
            band_um: 1.0,
        }
    }

    #[test]
    fn grid_hits_breaks_and_respects_spacing() {
        let g = graded_grid(-15.0, 15.0, &[-2.5, 2.5], 0.5, 0.25, 1.0);
        assert!(g.iter().any(|&x| (x - 2.5).abs() < 1e-12));
        assert!(g.iter().any(|&x| (x + 2.5).abs() < 1e-12));
        for w in g.windows(2) {
            let d = w[1] - w[0];
            let mid = 0.5 * (w[0] + w[1]);
            let limit = if (mid.abs() - 2.5).abs() < 1.0 { 0.25 } else { 0.5 };
            assert!(d > 0.0 && d <= limit + 1e-9);
        }
    }

    #[test]
    fn mesh_conforms_to_interfaces() {
        let wg = Waveguide::default();
        let m = build_mesh(&wg, &coarse()).unwrap();
        assert!(m.ys.contains(&0.0));
        assert!(m.xs.contains(&2.5) && m.xs.contains(&-2.5));
        for t in 0..m.triangles.len() {
            let ys = m.triangles[t].map(|k| m.nodes[k][1]);
            let xs = m.triangles[t].map(|k| m.nodes[k][0]);
            assert!(ys.iter().all(|&y| y <= 0.0) || ys.iter().all(|&y| y >= 0.0));
            for edge in [-2.5, 2.5] {
                assert!(xs.iter().all(|&x| x <= edge) || xs.iter().all(|&x| x >= edge));
            }
            assert!(m.areas[t] > MIN_TRIANGLE_AREA);
        }
        assert!(m.is_x_symmetric());
    }

    #[test]
    fn boundary_is_the_perimeter() {
        let m = build_mesh(&Waveguide::default(), &coarse()).unwrap();
        let win = Window::default();
        for (p, &b) in m.nodes.iter().zip(&m.boundary) {
            let on = p[0] == win.x_min || p[0] == win.x_max || p[1] == win.y_min || p[1] == win.y_max;
            assert_eq!(on, b);
        }
    }

    #[test]
    fn halving_resolution_quadruples_nodes() {
        let wg = Waveguide::default();
        let a = build_mesh(&wg, &coarse()).unwrap().node_count() as f64;
        let mut p = coarse();
        p.resolution_um *= 0.5;
        let b = build_mesh(&wg, &p).unwrap().node_count() as f64;
        let r = b / a;
        assert!((3.6..4.4).contains(&r), "ratio {r}");
    }

    #[test]
    fn window_without_core_is_rejected() {
        let mut wg = Waveguide::default();
        wg.geometry.window.x_min = 0.0;
        wg.geometry.window.x_max = 1.0;
        assert!(matches!(build_mesh(&wg, &coarse()), Err(Error::Config(_))));
    }

    #[test]
    fn locate_returns_partition_of_unity() {
        let m = build_mesh(&Waveguide::default(), &coarse()).unwrap();
        for &(x, y) in &[(0.1, 0.1), (-3.3, 7.7), (14.9, 39.9), (-2.5, 0.0)] {
            let (t, w) = m.locate(x, y).unwrap();
            assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            let px: f64 = (0..3).map(|k| w[k] * m.nodes[m.triangles[t][k]][0]).sum();
            let py: f64 = (0..3).map(|k| w[k] * m.nodes[m.triangles[t][k]][1]).sum();
            assert!((px - x).abs() < 1e-12 && (py - y).abs() < 1e-12);
        }
        assert!(m.locate(20.0, 0.0).is_none());
    }

    #[test]
    fn mirror_map_is_an_involution() {
        let m = build_mesh(&Waveguide::default(), &coarse()).unwrap();
        for k in (0..m.node_count()).step_by(37) {
            let r = m.mirror_node(k).unwrap();
            assert_eq!(m.mirror_node(r), Some(k));
            assert_eq!(m.nodes[r][0], -m.nodes[k][0]);
        }
    }

    #[test]
    fn text_export_has_header() {
        let m = from_grid(vec![0.0, 1.0, 2.0], vec![0.0, 1.0, 2.0]).unwrap();
        let mut buf = Vec::new();
        m.write_text(&mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert!(s.starts_with("9 8\n"));
        assert_eq!(s.lines().count(), 1 + 9 + 8);
    }
}
