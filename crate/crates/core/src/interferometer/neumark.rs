use crate::error::{Error, Result};
use crate::linalg::{eig_hermitian, ComplexMatrix, Real};

/// Block unitary `[[sqrt(I - P0), -sqrt(P0)], [sqrt(P0), sqrt(I - P0)]]`.
///
/// Both square roots come from one eigendecomposition, so the blocks commute
/// exactly and the result is unitary to rounding even when `P0` is only
/// positive within `tol`.
pub fn neumark_dilation<T: Real>(pi0: &ComplexMatrix<T>, tol: T) -> Result<ComplexMatrix<T>> {
    let eig = eig_hermitian(pi0, tol)?;
    let (lo, hi) = (eig.values[0], *eig.values.last().unwrap_or(&T::zero()));
    if lo < -tol {
        return Err(Error::NotPsd { min_eigenvalue: lo.as_f64() });
    }
    if hi > T::one() + tol {
        return Err(Error::EigenvalueAboveOne { max_eigenvalue: hi.as_f64() });
    }
    let clip = |x: T| x.max(T::zero()).min(T::one());
    let root = eig.map_spectrum(|x| clip(x).sqrt());
    let co_root = eig.map_spectrum(|x| (T::one() - clip(x)).sqrt());
    let n = pi0.rows();
    let mut u = ComplexMatrix::zeros(2 * n, 2 * n);
    u.set_block(0, 0, &co_root);
    u.set_block(0, n, &(-&root));
    u.set_block(n, 0, &root);
    u.set_block(n, n, &co_root);
    Ok(u)
}
