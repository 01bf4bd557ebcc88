use nalgebra::{Cholesky, DMatrix, SymmetricEigen};

use crate::error::{Error, Result};

/// Relative eigenvalue floor of `J W⁻¹ Jᵀ` below which damping is applied.
pub const CONDITION_FLOOR: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct Pseudoinverse {
    pub matrix: DMatrix<f64>,
    pub damped: bool,
}

/// Right weighted pseudoinverse `J⁺ = W⁻¹Jᵀ(JW⁻¹Jᵀ)⁻¹`.
///
/// `weight = None` means `W = I`. When `JW⁻¹Jᵀ` is numerically singular it
/// is replaced by `JW⁻¹Jᵀ + damping·μ·I`, `μ` its largest eigenvalue, and the
/// result is flagged as damped. A weight that is not symmetric positive
/// definite is refused.
pub fn pinv_weighted(
    j: &DMatrix<f64>,
    weight: Option<&DMatrix<f64>>,
    damping: f64,
) -> Result<Pseudoinverse> {
    pinv_weighted_with(j, weight, damping, CONDITION_FLOOR)
}

/// As [`pinv_weighted`] with an explicit relative eigenvalue `threshold`
/// below which damping kicks in. `f64::INFINITY` damps unconditionally.
pub fn pinv_weighted_with(
    j: &DMatrix<f64>,
    weight: Option<&DMatrix<f64>>,
    damping: f64,
    threshold: f64,
) -> Result<Pseudoinverse> {
    let (n, m) = j.shape();
    let jt = j.transpose();
    let w_inv_jt = match weight {
        None => jt,
        Some(w) => {
            if w.shape() != (m, m) {
                return Err(Error::DimensionMismatch {
                    expected: m,
                    got: w.nrows(),
                });
            }
            let scale = w.amax().max(f64::MIN_POSITIVE);
            if (w - w.transpose()).amax() > 1e-12 * scale {
                return Err(Error::NotPositiveDefinite);
            }
            let chol = Cholesky::new(w.clone()).ok_or(Error::NotPositiveDefinite)?;
            chol.solve(&jt)
        }
    };
    let mut gram = j * &w_inv_jt;
    // symmetrize against rounding before the eigen check
    gram = (&gram + gram.transpose()) * 0.5;
    let eig = SymmetricEigen::new(gram.clone()).eigenvalues;
    let max = eig.amax();
    let min = eig.min();
    let damped = !(max > 0.0) || min < threshold * max;
    if damped {
        for i in 0..n {
            gram[(i, i)] += damping * if max > 0.0 { max } else { 1.0 };
        }
    }
    let inv = Cholesky::new(gram)
        .map(|c| c.inverse())
        .ok_or(Error::RankDeficient)?;
    let matrix = w_inv_jt * inv;
    if matrix.iter().any(|v| !v.is_finite()) {
        return Err(Error::RankDeficient);
    }
    Ok(Pseudoinverse { matrix, damped })
}
