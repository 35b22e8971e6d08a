use std::fmt;

use serde::{Deserialize, Serialize};

use super::fields::ModeFields;
use crate::materials::Polarization;

/// Samples below this fraction of the peak are ignored when counting nodes.
pub const NOISE_FLOOR: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ModeLabel {
    /// Sign changes across the channel.
    pub m: u32,
    /// Sign changes into the depth.
    pub n: u32,
}

impl ModeLabel {
    pub const FUNDAMENTAL: ModeLabel = ModeLabel { m: 0, n: 0 };

    pub const fn new(m: u32, n: u32) -> Self {
        Self { m, n }
    }

    pub fn parity(self) -> Parity {
        if self.m.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

impl fmt::Display for ModeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.m, self.n)
    }
}

impl std::str::FromStr for ModeLabel {
    type Err = crate::Error;

    /// Accepts `(m,n)`, `m,n` and the compact `mn`.
    fn from_str(s: &str) -> crate::Result<Self> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')');
        let bad = || crate::Error::domain("ModeLabel::from_str", format!("cannot parse mode label {s:?}"));
        let (m, n) = match t.split_once(',') {
            Some((m, n)) => (m.trim().parse().map_err(|_| bad())?, n.trim().parse().map_err(|_| bad())?),
            None if t.len() == 2 && t.chars().all(|c| c.is_ascii_digit()) => {
                let b = t.as_bytes();
                (u32::from(b[0] - b'0'), u32::from(b[1] - b'0'))
            }
            None => return Err(bad()),
        };
        Ok(Self { m, n })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelResult {
    pub label: ModeLabel,
    pub parity: Parity,
    /// A sign change sat too close to the noise floor on every cut tried.
    pub ambiguous: bool,
}

struct CutCount {
    changes: u32,
    ambiguous: bool,
}

/// Sign changes along a sampled cut, ignoring samples under the noise floor.
fn count_sign_changes(values: &[f64], peak: f64) -> CutCount {
    let floor = NOISE_FLOOR * peak;
    let mut changes = 0;
    let mut ambiguous = false;
    let mut last: Option<f64> = None;
    // largest magnitude seen since the last sign change
    let mut lobe_max = 0.0f64;
    let mut prev_lobe = f64::INFINITY;
    for &v in values {
        if v.abs() <= floor {
            continue;
        }
        if let Some(p) = last {
            if p.signum() != v.signum() {
                changes += 1;
                prev_lobe = lobe_max;
                lobe_max = 0.0;
            }
        }
        lobe_max = lobe_max.max(v.abs());
        if changes > 0 && prev_lobe.min(lobe_max) < 10.0 * floor && lobe_max < 10.0 * floor {
            ambiguous = true;
        }
        last = Some(v);
    }
    if changes > 0 && prev_lobe.min(lobe_max) < 10.0 * floor {
        ambiguous = true;
    }
    CutCount { changes, ambiguous }
}

/// Counts nodes of the dominant electric component along the grid row and
/// column through the intensity maximum. The column is taken on the
/// substrate side only. When either count is ambiguous a second pair of cuts
/// offset by `offset` is tried.
pub fn label_mode(fields: &ModeFields, pol: Polarization, offset: f64) -> LabelResult {
    let mesh = &fields.mesh;
    let dom = &fields.d[pol.electric_axis().index()];
    let (nx, ny) = (mesh.nx(), mesh.ny());
    let intensity = |k: usize| -> f64 { fields.d.iter().map(|c| c[k].norm_sqr()).sum() };
    let kmax = (0..mesh.node_count()).fold(0, |b, k| if intensity(k) > intensity(b) { k } else { b });
    let (i0, j0) = (kmax % nx, kmax / nx);
    let peak = dom.iter().fold(0.0f64, |m, v| m.max(v.re.abs()));
    let j_surface = mesh.ys.partition_point(|&y| y < 0.0);

    let row = |j: usize| -> Vec<f64> { (0..nx).map(|i| dom[j * nx + i].re).collect() };
    let col = |i: usize| -> Vec<f64> { (j_surface..ny).map(|j| dom[j * nx + i].re).collect() };
    let nearest = |grid: &[f64], v: f64| -> usize {
        (0..grid.len()).fold(0, |b, k| if (grid[k] - v).abs() < (grid[b] - v).abs() { k } else { b })
    };

    let mut cm = count_sign_changes(&row(j0), peak);
    if cm.ambiguous {
        let j1 = nearest(&mesh.ys, mesh.ys[j0] + offset);
        let alt = count_sign_changes(&row(j1), peak);
        if !alt.ambiguous {
            cm = alt;
        }
    }
    let mut cn = count_sign_changes(&col(i0), peak);
    if cn.ambiguous {
        let i1 = nearest(&mesh.xs, mesh.xs[i0] + offset);
        let alt = count_sign_changes(&col(i1), peak);
        if !alt.ambiguous {
            cn = alt;
        }
    }
    let label = ModeLabel::new(cm.changes, cn.changes);
    LabelResult {
        label,
        parity: label.parity(),
        ambiguous: cm.ambiguous || cn.ambiguous,
    }
}

/// `‖u_odd‖ / ‖u‖` or `‖u_even‖ / ‖u‖`, whichever is smaller, for the dominant
/// component under `x → -x`. `None` if the mesh is not mirror symmetric.
pub fn parity_defect(fields: &ModeFields, pol: Polarization) -> Option<f64> {
    let mesh = &fields.mesh;
    if !mesh.is_x_symmetric() {
        return None;
    }
    let dom = &fields.d[pol.electric_axis().index()];
    let (mut even, mut odd, mut total) = (0.0, 0.0, 0.0);
    for k in 0..mesh.node_count() {
        let r = mesh.mirror_node(k)?;
        even += (dom[k] + dom[r]).norm_sqr() / 4.0;
        odd += (dom[k] - dom[r]).norm_sqr() / 4.0;
        total += dom[k].norm_sqr();
    }
    Some((even.min(odd) / total).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counting_skips_noise() {
        let peak = 1.0;
        let v = [0.0, 0.5, 1.0, 0.5, 1e-4, -1e-4, 1e-4, -0.3, -0.8, -0.2];
        let c = count_sign_changes(&v, peak);
        assert_eq!(c.changes, 1);
        assert!(!c.ambiguous);
    }

    #[test]
    fn tiny_lobe_is_ambiguous() {
        let v = [0.2, 1.0, 0.2, -0.004, 0.003];
        let c = count_sign_changes(&v, 1.0);
        assert_eq!(c.changes, 2);
        assert!(c.ambiguous);
    }

    #[test]
    fn labels_parse_and_print() {
        let l: ModeLabel = "(1,0)".parse().unwrap();
        assert_eq!(l, ModeLabel::new(1, 0));
        assert_eq!("01".parse::<ModeLabel>().unwrap(), ModeLabel::new(0, 1));
        assert_eq!(l.to_string(), "(1,0)");
        assert_eq!(l.parity(), Parity::Odd);
        assert!("x".parse::<ModeLabel>().is_err());
    }
}
