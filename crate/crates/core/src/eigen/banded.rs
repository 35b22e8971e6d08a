use crate::fem::CsrMatrix;

/// Symmetric banded matrix, lower band stored row by row.
///
/// Row `i` keeps entries `(i, i - bw ..= i)` in `data[i * (bw + 1) ..]`, the
/// diagonal last.
#[derive(Debug, Clone)]
pub struct BandedSymmetric {
    n: usize,
    bw: usize,
    data: Vec<f64>,
}

/// `L D Lᵀ` factors of a [`BandedSymmetric`] matrix, unit `L` in band storage.
#[derive(Debug, Clone)]
pub struct BandedLdlt {
    n: usize,
    bw: usize,
    l: Vec<f64>,
    d: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularPivot {
    pub row: usize,
    pub value: f64,
}

impl BandedSymmetric {
    /// `A - σB` for symmetric sparse `A`, `B` (lower triangle read).
    pub fn shifted(a: &CsrMatrix, b: &CsrMatrix, sigma: f64) -> Self {
        let n = a.nrows();
        let bw = a.bandwidth().max(b.bandwidth());
        let w = bw + 1;
        let mut data = vec![0.0; n * w];
        for r in 0..n {
            for (c, v) in a.row(r) {
                if c <= r {
                    data[r * w + bw - (r - c)] += v;
                }
            }
            for (c, v) in b.row(r) {
                if c <= r {
                    data[r * w + bw - (r - c)] -= sigma * v;
                }
            }
        }
        Self { n, bw, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn bandwidth(&self) -> usize {
        self.bw
    }

    /// Factorizes without pivoting. Fails when a pivot falls below
    /// `rel_tol` times the largest diagonal magnitude.
    pub fn factor(self, rel_tol: f64) -> Result<BandedLdlt, SingularPivot> {
        let (n, bw) = (self.n, self.bw);
        let w = bw + 1;
        let scale = (0..n).map(|i| self.data[i * w + bw].abs()).fold(0.0, f64::max);
        let tiny = rel_tol * scale.max(f64::MIN_POSITIVE);
        let mut l = self.data;
        let mut d = vec![0.0; n];
        // scratch: row i of L times D
        let mut ld = vec![0.0; w];
        for i in 0..n {
            let j0 = i.saturating_sub(bw);
            let row_i = i * w;
            for j in j0..i {
                // L_ij = (a_ij - Σ_{k<j} L_ik d_k L_jk) / d_j
                let row_j = j * w;
                let k0 = j0.max(j.saturating_sub(bw));
                let mut s = 0.0;
                for k in k0..j {
                    s += ld[k - j0] * l[row_j + bw - (j - k)];
                }
                let a_ij = l[row_i + bw - (i - j)];
                let lij = (a_ij - s) / d[j];
                l[row_i + bw - (i - j)] = lij;
                ld[j - j0] = lij * d[j];
            }
            let mut s = 0.0;
            for k in j0..i {
                s += ld[k - j0] * l[row_i + bw - (i - k)];
            }
            let di = l[row_i + bw] - s;
            if !di.is_finite() || di.abs() <= tiny {
                return Err(SingularPivot { row: i, value: di });
            }
            d[i] = di;
            l[row_i + bw] = 1.0;
        }
        Ok(BandedLdlt { n, bw, l, d })
    }
}

impl BandedLdlt {
    pub fn dim(&self) -> usize {
        self.n
    }

    /// Number of negative pivots, equal to the number of eigenvalues of
    /// `A - σB` below zero (Sylvester inertia).
    pub fn negative_pivots(&self) -> usize {
        self.d.iter().filter(|&&v| v < 0.0).count()
    }

    /// Solves in place.
    pub fn solve_in_place(&self, x: &mut [f64]) {
        let (n, bw) = (self.n, self.bw);
        let w = bw + 1;
        for i in 0..n {
            let j0 = i.saturating_sub(bw);
            let row = &self.l[i * w + bw - (i - j0)..i * w + bw];
            let s: f64 = row.iter().zip(&x[j0..i]).map(|(a, b)| a * b).sum();
            x[i] -= s;
        }
        for (xi, di) in x.iter_mut().zip(&self.d) {
            *xi /= di;
        }
        for i in (0..n).rev() {
            let xi = x[i];
            let j0 = i.saturating_sub(bw);
            let row = &self.l[i * w + bw - (i - j0)..i * w + bw];
            for (xj, lij) in x[j0..i].iter_mut().zip(row) {
                *xj -= lij * xi;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn laplacian(n: usize) -> CsrMatrix {
        let mut t = Vec::new();
        for i in 0..n {
            t.push((i, i, 2.0));
            if i + 1 < n {
                t.push((i, i + 1, -1.0));
                t.push((i + 1, i, -1.0));
            }
        }
        CsrMatrix::from_triplets(n, n, t)
    }

    #[test]
    fn solves_tridiagonal_system() {
        let a = laplacian(50);
        let f = BandedSymmetric::shifted(&a, &CsrMatrix::identity(50), 0.0).factor(1e-14).unwrap();
        let x_true: Vec<f64> = (0..50).map(|i| (i as f64 * 0.3).sin()).collect();
        let mut x = a.apply(&x_true);
        f.solve_in_place(&mut x);
        for (p, q) in x.iter().zip(&x_true) {
            assert!((p - q).abs() < 1e-11);
        }
        assert_eq!(f.negative_pivots(), 0);
    }

    #[test]
    fn wide_band_indefinite() {
        // 2-D 5-point Laplacian on a 7x6 grid, shifted into the spectrum
        let (nx, ny) = (7, 6);
        let n = nx * ny;
        let mut t = Vec::new();
        for j in 0..ny {
            for i in 0..nx {
                let k = j * nx + i;
                t.push((k, k, 4.0));
                if i + 1 < nx {
                    t.push((k, k + 1, -1.0));
                    t.push((k + 1, k, -1.0));
                }
                if j + 1 < ny {
                    t.push((k, k + nx, -1.0));
                    t.push((k + nx, k, -1.0));
                }
            }
        }
        let a = CsrMatrix::from_triplets(n, n, t);
        let id = CsrMatrix::identity(n);
        let sigma = 3.3;
        let f = BandedSymmetric::shifted(&a, &id, sigma).factor(1e-14).unwrap();
        let x_true: Vec<f64> = (0..n).map(|i| 1.0 + (i % 5) as f64).collect();
        let ax = a.apply(&x_true);
        let mut x: Vec<f64> = ax.iter().zip(&x_true).map(|(p, q)| p - sigma * q).collect();
        f.solve_in_place(&mut x);
        for (p, q) in x.iter().zip(&x_true) {
            assert!((p - q).abs() < 1e-9);
        }
        // eigenvalues of this Laplacian below 3.3
        let mut below = 0;
        for p in 1..=nx {
            for q in 1..=ny {
                let lam = 4.0
                    - 2.0 * (std::f64::consts::PI * p as f64 / (nx + 1) as f64).cos()
                    - 2.0 * (std::f64::consts::PI * q as f64 / (ny + 1) as f64).cos();
                if lam < sigma {
                    below += 1;
                }
            }
        }
        assert_eq!(f.negative_pivots(), below);
    }

    #[test]
    fn exact_singularity_is_reported() {
        let a = CsrMatrix::from_diagonal(&[1.0, 2.0, 3.0]);
        let err = BandedSymmetric::shifted(&a, &CsrMatrix::identity(3), 2.0).factor(1e-12).unwrap_err();
        assert_eq!(err.row, 1);
    }
}
