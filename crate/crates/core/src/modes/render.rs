use std::io::Write;

use serde::{Deserialize, Serialize};

use super::solver::GuidedMode;
use crate::Result;

/// Rectangle and sample counts of an intensity raster.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RasterSpec {
    pub x_range: (f64, f64),
    pub y_range: (f64, f64),
    pub nx: usize,
    pub ny: usize,
}

impl Default for RasterSpec {
    fn default() -> Self {
        Self {
            x_range: (-10.0, 10.0),
            y_range: (-2.0, 25.0),
            nx: 101,
            ny: 136,
        }
    }
}

/// Sampled `|e|²`, peak normalized, stored row by row (`y` outer).
#[derive(Debug, Clone, PartialEq)]
pub struct Raster {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    pub values: Vec<f64>,
}

fn linspace((a, b): (f64, f64), n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![0.5 * (a + b)];
    }
    (0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect()
}

impl Raster {
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.xs.len() + i]
    }

    /// Position and value of the brightest sample.
    pub fn argmax(&self) -> (f64, f64, f64) {
        let nx = self.xs.len();
        let k = (0..self.values.len()).fold(0, |b, k| if self.values[k] > self.values[b] { k } else { b });
        (self.xs[k % nx], self.ys[k / nx], self.values[k])
    }

    /// Grid layout: header row of `x`, then one row per `y` led by its value.
    pub fn write_grid_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["y\\x".to_string()];
        header.extend(self.xs.iter().map(|x| format!("{x}")));
        w.write_record(&header).map_err(csv_err)?;
        for (j, y) in self.ys.iter().enumerate() {
            let mut row = vec![format!("{y}")];
            row.extend((0..self.xs.len()).map(|i| format!("{:.6e}", self.at(i, j))));
            w.write_record(&row).map_err(csv_err)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Long layout with `x_um, y_um, intensity` columns.
    pub fn write_points_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["x_um", "y_um", "intensity"]).map_err(csv_err)?;
        for (j, y) in self.ys.iter().enumerate() {
            for (i, x) in self.xs.iter().enumerate() {
                w.write_record([format!("{x}"), format!("{y}"), format!("{:.6e}", self.at(i, j))])
                    .map_err(csv_err)?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

fn csv_err(e: csv::Error) -> crate::Error {
    crate::Error::Io(std::io::Error::other(e))
}

/// Incoherent weighted sum of `|e|²` over `modes`, peak normalized to 1.
pub fn render_intensity(modes: &[(&GuidedMode, f64)], spec: &RasterSpec) -> Raster {
    let xs = linspace(spec.x_range, spec.nx);
    let ys = linspace(spec.y_range, spec.ny);
    let mut values = vec![0.0; xs.len() * ys.len()];
    for (j, &y) in ys.iter().enumerate() {
        for (i, &x) in xs.iter().enumerate() {
            values[j * xs.len() + i] = modes
                .iter()
                .map(|(m, w)| w * m.fields.e_at(x, y).iter().map(|c| c.norm_sqr()).sum::<f64>())
                .sum();
        }
    }
    let peak = values.iter().fold(0.0f64, |a, &b| a.max(b));
    if peak > 0.0 {
        for v in values.iter_mut() {
            *v /= peak;
        }
    }
    Raster { xs, ys, values }
}
