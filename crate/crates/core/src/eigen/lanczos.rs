use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::banded::{BandedLdlt, BandedSymmetric};
use crate::fem::{AssembledProblem, CsrMatrix};
use crate::{Error, Result};

const MAX_SHIFT_RETRIES: usize = 3;
const PIVOT_REL_TOL: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenRequest {
    /// Shift `σ`, µm⁻².
    pub shift: f64,
    /// Largest number of pairs to return.
    pub count: usize,
    /// `(β²_min, β²_max)`, µm⁻².
    pub interval: (f64, f64),
    /// Bound on `‖Au - λBu‖ / (|λ| ‖Bu‖)`.
    pub tolerance: f64,
    pub seed: u64,
    /// Cap on the Krylov dimension.
    pub max_subspace: usize,
}

impl EigenRequest {
    /// Every pair in the guided window of `problem`, shifted to its top.
    pub fn guided(problem: &AssembledProblem) -> Self {
        let (lo, hi) = problem.guided_window();
        Self {
            shift: hi,
            count: usize::MAX,
            interval: (lo, hi),
            tolerance: 1e-9,
            seed: 0x5eed,
            max_subspace: 600,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = self.interval;
        if !(lo < self.shift && self.shift <= hi) {
            return Err(Error::domain(
                "eigen::solve",
                format!("shift {} outside ({lo}, {hi}]", self.shift),
            ));
        }
        if self.count == 0 {
            return Err(Error::domain("eigen::solve", "count must be >= 1"));
        }
        if !(self.tolerance > 0.0 && self.tolerance <= 1e-4) {
            return Err(Error::domain(
                "eigen::solve",
                format!("tolerance {} outside (0, 1e-4]", self.tolerance),
            ));
        }
        if self.max_subspace < 2 {
            return Err(Error::domain("eigen::solve", "max_subspace must be >= 2"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    /// `β²`, µm⁻².
    pub value: f64,
    /// B-normalized eigenvector over the unknowns.
    pub vector: Vec<f64>,
    /// `‖Au - λBu‖ / (|λ| ‖Bu‖)`.
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenSolution {
    /// Sorted by eigenvalue, largest first.
    pub pairs: Vec<EigenPair>,
    /// Fewer pairs than requested lie in the interval.
    pub window_exhausted: bool,
    pub shift_used: f64,
    pub shift_retries: usize,
    pub iterations: usize,
}

/// Shift-invert Lanczos in the `B` inner product for all pairs of
/// `A u = λ B u` inside `request.interval`, largest first.
///
/// With a finite `count` the iteration stops once the `count` in-interval
/// pairs nearest the shift have converged.
///
/// `A` and `B` must be symmetric, `B` positive definite.
pub fn solve(a: &CsrMatrix, b: &CsrMatrix, request: &EigenRequest) -> Result<EigenSolution> {
    request.validate()?;
    if a.nrows() != b.nrows() || a.nrows() != a.ncols() || b.nrows() != b.ncols() {
        return Err(Error::domain("eigen::solve", "A and B must be square and of equal size"));
    }
    let (lo, hi) = request.interval;
    let mut shift = request.shift;
    let mut retries = 0;
    let factor = loop {
        match BandedSymmetric::shifted(a, b, shift).factor(PIVOT_REL_TOL) {
            Ok(f) => break f,
            Err(p) if retries < MAX_SHIFT_RETRIES => {
                retries += 1;
                let next = shift - 1e-3 * retries as f64 * (hi - lo);
                tracing::warn!(target: "eigen", row = p.row, pivot = p.value, shift, next, "singular pivot, moving shift");
                shift = next;
            }
            Err(p) => {
                return Err(Error::numerical(
                    "eigen",
                    "solve",
                    format!("factorization of A - σB failed at row {} after {retries} shift retries", p.row),
                ))
            }
        }
    };
    let run = lanczos(a, b, &factor, shift, request)?;
    if let Some(bad) = run.pairs.iter().find(|p| p.residual > request.tolerance) {
        return Err(Error::numerical(
            "eigen",
            "solve",
            format!(
                "residual {:.3e} above tolerance {:.1e} after {} Lanczos steps",
                bad.residual, request.tolerance, run.iterations
            ),
        ));
    }
    tracing::debug!(target: "eigen", iterations = run.iterations, found = run.pairs.len(), shift, "lanczos done");
    let mut pairs = run.pairs;
    pairs.retain(|p| p.value > lo && p.value <= hi * (1.0 + 1e-12));
    pairs.sort_by(|p, q| q.value.total_cmp(&p.value));
    let window_exhausted = pairs.len() < request.count;
    pairs.truncate(request.count);
    Ok(EigenSolution {
        pairs,
        window_exhausted,
        shift_used: shift,
        shift_retries: retries,
        iterations: run.iterations,
    })
}

/// [`solve`] on an assembled mode problem.
pub fn solve_problem(problem: &AssembledProblem, request: &EigenRequest) -> Result<EigenSolution> {
    solve(&problem.a, &problem.b, request)
}

struct LanczosRun {
    pairs: Vec<EigenPair>,
    iterations: usize,
}

fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

/// Removes the span of `q` from `w` in the B inner product, twice.
fn reorthogonalize(q: &[Vec<f64>], bq: &[Vec<f64>], w: &mut [f64]) {
    for _ in 0..2 {
        for (qi, bqi) in q.iter().zip(bq) {
            let c = dot(bqi, w);
            axpy(-c, qi, w);
        }
    }
}

fn lanczos(a: &CsrMatrix, b: &CsrMatrix, factor: &BandedLdlt, sigma: f64, req: &EigenRequest) -> Result<LanczosRun> {
    let n = a.nrows();
    let (lo, hi) = req.interval;
    // eigenvalues in [lo, hi] map to |θ| >= theta_cut under θ = 1/(λ - σ)
    let far = (lo - sigma).abs().max((hi - sigma).abs());
    let theta_cut = 1.0 / far;
    let m_max = req.max_subspace.min(n);
    let ritz_tol = (req.tolerance * 1e-2).max(1e-14);

    let mut rng = ChaCha8Rng::seed_from_u64(req.seed);
    let mut q: Vec<Vec<f64>> = Vec::new();
    let mut bq: Vec<Vec<f64>> = Vec::new();
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();

    let fresh = |rng: &mut ChaCha8Rng, q: &[Vec<f64>], bq: &[Vec<f64>]| -> Option<(Vec<f64>, Vec<f64>)> {
        for _ in 0..3 {
            let mut r: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            reorthogonalize(q, bq, &mut r);
            let br = b.apply(&r);
            let nrm = dot(&r, &br).sqrt();
            if nrm > 1e-8 {
                return Some((r.iter().map(|v| v / nrm).collect(), br.iter().map(|v| v / nrm).collect()));
            }
        }
        None
    };

    let (q0, bq0) = fresh(&mut rng, &q, &bq)
        .ok_or_else(|| Error::numerical("eigen", "lanczos", "could not draw a start vector"))?;
    q.push(q0);
    bq.push(bq0);

    let mut last_wanted: Option<usize> = None;
    let mut next_check = 20.min(m_max);

    loop {
        let j = q.len() - 1;
        let mut w = bq[j].clone();
        factor.solve_in_place(&mut w);
        let aj = dot(&bq[j], &w);
        axpy(-aj, &q[j], &mut w);
        if j > 0 {
            axpy(-beta[j - 1], &q[j - 1], &mut w);
        }
        reorthogonalize(&q, &bq, &mut w);
        let bw = b.apply(&w);
        let bj = dot(&w, &bw).max(0.0).sqrt();
        alpha.push(aj);
        let m = q.len();

        let breakdown = bj <= 1e-12 * aj.abs().max(theta_cut);
        let next = if m >= m_max {
            None
        } else if breakdown {
            // invariant subspace: continue from a fresh orthogonal direction
            fresh(&mut rng, &q, &bq).map(|v| (0.0, v))
        } else {
            Some((bj, (w.iter().map(|v| v / bj).collect(), bw.iter().map(|v| v / bj).collect())))
        };
        let full = next.is_none();
        // residual coupling of the last Lanczos vector to the Ritz vectors
        let coupling = if breakdown { 0.0 } else { bj };

        if m >= next_check || full {
            next_check = m + (m / 8).max(8);
            let (theta, s) = tridiagonal_eigen(&alpha, &beta);
            let scale = theta.iter().fold(0.0f64, |x, t| x.max(t.abs()));
            let converged =
                |i: usize| (coupling * s[(m - 1, i)]).abs() <= ritz_tol * theta[i].abs().max(1e-3 * scale);
            let mut order: Vec<usize> = (0..m).collect();
            order.sort_by(|&x, &y| theta[y].abs().total_cmp(&theta[x].abs()));
            let in_window = |i: usize| {
                let lambda = sigma + 1.0 / theta[i];
                theta[i].abs() >= theta_cut && lambda > lo && lambda <= hi * (1.0 + 1e-12)
            };
            let mut wanted: Vec<usize> = order.iter().copied().filter(|&i| theta[i].abs() >= theta_cut).collect();
            let mut guard = order.iter().copied().find(|&i| theta[i].abs() < theta_cut);
            if req.count < usize::MAX {
                // only the `count` in-window pairs nearest the shift are needed
                let near: Vec<usize> = order.iter().copied().filter(|&i| in_window(i)).take(req.count).collect();
                if near.len() == req.count {
                    let last = near[req.count - 1];
                    let pos = order.iter().position(|&i| i == last).expect("present");
                    guard = order.get(pos + 1).copied();
                    wanted = order[..=pos].to_vec();
                }
            }
            let all_conv = wanted.iter().all(|&i| converged(i)) && guard.is_none_or(converged);
            let stable = last_wanted == Some(wanted.len());
            last_wanted = Some(wanted.len());
            if (all_conv && stable) || full {
                let pairs: Vec<EigenPair> = wanted
                    .iter()
                    .map(|&i| {
                        let mut u = vec![0.0; n];
                        for (k, qk) in q.iter().enumerate() {
                            axpy(s[(k, i)], qk, &mut u);
                        }
                        finish_pair(a, b, u)
                    })
                    .collect();
                let accurate = pairs.iter().all(|p| p.residual <= req.tolerance);
                if accurate || full {
                    if !all_conv || !accurate {
                        tracing::warn!(target: "eigen", m, "Krylov space exhausted before convergence");
                    }
                    return Ok(LanczosRun { pairs, iterations: m });
                }
            }
        }

        let (b_next, (qn, bqn)) = next.expect("checked above");
        beta.push(b_next);
        q.push(qn);
        bq.push(bqn);
    }
}

fn tridiagonal_eigen(alpha: &[f64], beta: &[f64]) -> (Vec<f64>, DMatrix<f64>) {
    let m = alpha.len();
    let mut t = DMatrix::<f64>::zeros(m, m);
    for i in 0..m {
        t[(i, i)] = alpha[i];
        if i + 1 < m {
            t[(i, i + 1)] = beta[i];
            t[(i + 1, i)] = beta[i];
        }
    }
    let e = SymmetricEigen::new(t);
    (e.eigenvalues.iter().copied().collect(), e.eigenvectors)
}

/// B-normalizes, fixes the sign and evaluates the Rayleigh quotient and residual.
fn finish_pair(a: &CsrMatrix, b: &CsrMatrix, mut u: Vec<f64>) -> EigenPair {
    let bu = b.apply(&u);
    let nrm = dot(&u, &bu).sqrt();
    let (imax, _) = u
        .iter()
        .enumerate()
        .fold((0, 0.0f64), |(bi, bv), (i, v)| if v.abs() > bv { (i, v.abs()) } else { (bi, bv) });
    let sign = if u[imax] < 0.0 { -1.0 } else { 1.0 };
    for v in u.iter_mut() {
        *v *= sign / nrm;
    }
    let au = a.apply(&u);
    let bu = b.apply(&u);
    let lambda = dot(&u, &au) / dot(&u, &bu);
    let r: f64 = au.iter().zip(&bu).map(|(x, y)| (x - lambda * y).powi(2)).sum::<f64>().sqrt();
    let bn = dot(&bu, &bu).sqrt();
    EigenPair {
        value: lambda,
        residual: r / (lambda.abs().max(f64::MIN_POSITIVE) * bn),
        vector: u,
    }
}
