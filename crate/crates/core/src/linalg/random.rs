//! Seeded random matrices for tests and sampling.

use rand::Rng;
use rand_distr::StandardNormal;

use super::{ComplexMatrix, Real, C};

fn gaussian<T: Real, R: Rng + ?Sized>(rng: &mut R) -> C<T> {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C::new(T::lit(re), T::lit(im))
}

/// Hermitian matrix `(G + G^dagger)/2` with complex Gaussian `G`.
pub fn random_hermitian<T: Real, R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix<T> {
    let g = ComplexMatrix::from_fn(n, n, |_, _| gaussian(rng));
    (&g + &g.adjoint()).scale_real(T::lit(0.5))
}

/// Haar-distributed unitary: QR of a complex Gaussian matrix with the phases
/// of `R`'s diagonal absorbed into `Q`.
pub fn haar_unitary<T: Real, R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix<T> {
    let g = ComplexMatrix::from_fn(n, n, |_, _| gaussian::<T, R>(rng));
    let mut cols: Vec<Vec<C<T>>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut v = g.column(j);
        // modified Gram-Schmidt, two passes
        for _ in 0..2 {
            for q in &cols {
                let proj = q.iter().zip(&v).fold(C::new(T::zero(), T::zero()), |s, (a, b)| s + a.conj() * b);
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= *qi * proj;
                }
            }
        }
        let norm = v.iter().fold(T::zero(), |s, x| s + x.norm_sqr()).sqrt();
        // R_jj = <q_j|g_j> is real positive here, so Q is already Haar.
        cols.push(v.into_iter().map(|x| x / norm).collect());
    }
    ComplexMatrix::from_fn(n, n, |i, j| cols[j][i])
}
