use nalgebra::{Cholesky, DMatrix, SymmetricEigen};

use crate::fem::CsrMatrix;
use crate::{Error, Result};

/// All eigenvalues of `A u = λ B u` by Cholesky reduction of a dense copy,
/// largest first. Meant for problems of at most a few thousand unknowns.
pub fn dense_generalized_eigenvalues(a: &CsrMatrix, b: &CsrMatrix) -> Result<Vec<f64>> {
    let n = a.nrows();
    let ad = DMatrix::from_row_slice(n, n, &a.to_dense());
    let bd = DMatrix::from_row_slice(n, n, &b.to_dense());
    let chol = Cholesky::new(bd)
        .ok_or_else(|| Error::numerical("oracles", "dense_generalized_eigenvalues", "B is not positive definite"))?;
    let l = chol.l();
    let linv = l
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::numerical("oracles", "dense_generalized_eigenvalues", "singular Cholesky factor"))?;
    let c = &linv * ad * linv.transpose();
    let c = (&c + c.transpose()) * 0.5;
    let mut vals: Vec<f64> = SymmetricEigen::new(c).eigenvalues.iter().copied().collect();
    vals.sort_by(|x, y| y.total_cmp(x));
    Ok(vals)
}
