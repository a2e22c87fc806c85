use super::{ComplexMatrix, Real, C};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;

/// Spectral decomposition `m = V diag(values) V^dagger` of a Hermitian matrix.
///
/// Eigenvalues are ascending; column `k` of `vectors` belongs to `values[k]`.
/// Each eigenvector is gauge-fixed so that its first largest-modulus
/// component is real and positive.
#[derive(Debug, Clone)]
pub struct HermitianEigen<T: Real = f64> {
    pub values: Vec<T>,
    pub vectors: ComplexMatrix<T>,
}

impl<T: Real> HermitianEigen<T> {
    /// `V f(Λ) V^dagger`.
    pub fn map_spectrum(&self, f: impl Fn(T) -> T) -> ComplexMatrix<T> {
        let n = self.values.len();
        let v = &self.vectors;
        let fl: Vec<T> = self.values.iter().map(|&l| f(l)).collect();
        ComplexMatrix::from_fn(n, n, |i, j| {
            (0..n).fold(C::new(T::zero(), T::zero()), |acc, k| {
                acc + v[(i, k)] * v[(j, k)].conj() * fl[k]
            })
        })
    }

    pub fn reconstruct(&self) -> ComplexMatrix<T> {
        self.map_spectrum(|l| l)
    }

    pub fn vector(&self, k: usize) -> Vec<C<T>> {
        self.vectors.column(k)
    }
}

/// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
///
/// Fails with [`Error::NotHermitian`] when `|m - m^dagger|` exceeds `tol`
/// anywhere. The input is symmetrized before rotating.
pub fn eig_hermitian<T: Real>(m: &ComplexMatrix<T>, tol: T) -> Result<HermitianEigen<T>> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch { expected: m.rows(), found: m.cols() });
    }
    let residual = m.hermitian_residual();
    if !(residual <= tol) {
        return Err(Error::NotHermitian { residual: residual.as_f64() });
    }
    let n = m.rows();
    let half = T::lit(0.5);
    let mut a = ComplexMatrix::from_fn(n, n, |i, j| (m[(i, j)] + m[(j, i)].conj()) * half);
    let mut v = ComplexMatrix::<T>::identity(n);

    let scale = a.frobenius_norm();
    let floor = T::epsilon() * T::epsilon() * scale * scale;
    for _ in 0..MAX_SWEEPS {
        let off: T = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .fold(T::zero(), |s, (i, j)| s + a[(i, j)].norm_sqr());
        if off <= floor || scale == T::zero() {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.partial_cmp(&a[(j, j)].re).unwrap_or(std::cmp::Ordering::Equal));
    let values: Vec<T> = order.iter().map(|&k| a[(k, k)].re).collect();
    let mut vectors = ComplexMatrix::from_fn(n, n, |i, k| v[(i, order[k])]);
    for k in 0..n {
        fix_gauge(&mut vectors, k);
    }
    Ok(HermitianEigen { values, vectors })
}

/// One Jacobi rotation annihilating `a[p][q]`; `a <- J^dagger a J`, `v <- v J`.
fn rotate<T: Real>(a: &mut ComplexMatrix<T>, v: &mut ComplexMatrix<T>, p: usize, q: usize) {
    let g = a[(p, q)];
    let mag = g.norm();
    if mag == T::zero() {
        return;
    }
    let phase = g / mag;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let tau = (aqq - app) / (T::lit(2.0) * mag);
    let sign = if tau >= T::zero() { T::one() } else { -T::one() };
    let t = sign / (tau.abs() + (T::one() + tau * tau).sqrt());
    let cs = T::one() / (T::one() + t * t).sqrt();
    let sn = t * cs;
    let n = a.rows();
    // J: [p][p]=c, [q][q]=c, [p][q]=s e, [q][p]=-s conj(e)
    let s_e = phase * sn;
    let s_ec = phase.conj() * sn;
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * cs - akq * s_ec;
        a[(k, q)] = akp * s_e + akq * cs;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = apk * cs - aqk * s_e;
        a[(q, k)] = apk * s_ec + aqk * cs;
    }
    a[(p, q)] = C::new(T::zero(), T::zero());
    a[(q, p)] = C::new(T::zero(), T::zero());
    a[(p, p)] = C::new(a[(p, p)].re, T::zero());
    a[(q, q)] = C::new(a[(q, q)].re, T::zero());
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * cs - vkq * s_ec;
        v[(k, q)] = vkp * s_e + vkq * cs;
    }
}

fn fix_gauge<T: Real>(vectors: &mut ComplexMatrix<T>, k: usize) {
    let n = vectors.rows();
    let max = (0..n).fold(T::zero(), |m, i| m.max(vectors[(i, k)].norm()));
    if max == T::zero() {
        return;
    }
    let cutoff = max * (T::one() - T::lit(1e-9));
    let lead = (0..n).find(|&i| vectors[(i, k)].norm() >= cutoff).unwrap_or(0);
    let z = vectors[(lead, k)];
    let rot = z.conj() / z.norm();
    for i in 0..n {
        vectors[(i, k)] *= rot;
    }
    vectors[(lead, k)] = C::new(vectors[(lead, k)].re, T::zero());
}

/// Principal square root of a PSD matrix.
///
/// Eigenvalues in `[-tol, 0)` are clipped to zero before rooting; anything
/// below `-tol` is [`Error::NotPsd`].
pub fn psd_sqrt<T: Real>(m: &ComplexMatrix<T>, tol: T) -> Result<ComplexMatrix<T>> {
    let eig = eig_hermitian(m, tol)?;
    if let Some(&min) = eig.values.first() {
        if min < -tol {
            return Err(Error::NotPsd { min_eigenvalue: min.as_f64() });
        }
    }
    Ok(eig.map_spectrum(|l| l.max(T::zero()).sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::random::random_hermitian;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    type M = ComplexMatrix<f64>;

    /// Closed-form eigenvalues of a real symmetric 2x2 matrix.
    fn sym2_eigenvalues(a: f64, b: f64, d: f64) -> (f64, f64) {
        let mean = 0.5 * (a + d);
        let r = (0.25 * (a - d) * (a - d) + b * b).sqrt();
        (mean - r, mean + r)
    }

    fn pi0_printed() -> M {
        let s = 3f64.sqrt() / 6.0;
        M::from_real(2, 2, &[2.0 / 3.0, -s, -s, 2.0 / 3.0]).unwrap()
    }

    #[test]
    fn diagonal_matrix_is_its_own_decomposition() {
        let eig = eig_hermitian(&M::diag_real(&[2.0, 5.0]), 1e-10).unwrap();
        assert_eq!(eig.values, vec![2.0, 5.0]);
        assert!(eig.vectors.max_abs_diff(&M::identity(2)) < 1e-15);
    }

    #[test]
    fn two_by_two_block_matches_closed_form() {
        let s = 3f64.sqrt() / 6.0;
        let (lo, hi) = sym2_eigenvalues(2.0 / 3.0, -s, 2.0 / 3.0);
        let eig = eig_hermitian(&pi0_printed(), 1e-10).unwrap();
        assert!((eig.values[0] - lo).abs() < 1e-14);
        assert!((eig.values[1] - hi).abs() < 1e-14);
        assert!((lo - (2.0 / 3.0 - s)).abs() < 1e-15);
        let r = 0.5f64.sqrt();
        let v0 = eig.vector(0);
        let v1 = eig.vector(1);
        assert!((v0[0].re - r).abs() < 1e-14 && (v0[1].re - r).abs() < 1e-14);
        assert!((v1[0].re - r).abs() < 1e-14 && (v1[1].re + r).abs() < 1e-14);
    }

    #[test]
    fn random_hermitian_reconstructs() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let m = random_hermitian(8, &mut rng);
            let eig = eig_hermitian(&m, 1e-10).unwrap();
            assert!(eig.reconstruct().max_abs_diff(&m) < 1e-10);
            assert!(eig.vectors.is_unitary(1e-10));
            assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn projector_spectrum_is_binary() {
        let u = vec![C::new(0.6, 0.0), C::new(0.0, 0.8), C::new(0.0, 0.0)];
        let p = M::outer(&u, &u);
        let eig = eig_hermitian(&p, 1e-10).unwrap();
        for l in eig.values {
            assert!(l.abs() < 1e-10 || (l - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = M::from_real(2, 2, &[1.0, 2.0, 0.0, 1.0]).unwrap();
        assert!(matches!(eig_hermitian(&m, 1e-10), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn sqrt_of_identity_and_zero() {
        assert!(psd_sqrt(&M::identity(3), 1e-10).unwrap().max_abs_diff(&M::identity(3)) < 1e-15);
        assert!(psd_sqrt(&M::zeros(3, 3), 1e-10).unwrap().max_abs() == 0.0);
    }

    #[test]
    fn sqrt_of_printed_block() {
        let p = pi0_printed();
        let r = psd_sqrt(&p, 1e-10).unwrap();
        assert!((&r * &r).max_abs_diff(&p) < 1e-14);
        let s = 3f64.sqrt() / 6.0;
        let eig = eig_hermitian(&r, 1e-10).unwrap();
        assert!((eig.values[0] - (2.0 / 3.0 - s).sqrt()).abs() < 1e-14);
        assert!((eig.values[1] - (2.0 / 3.0 + s).sqrt()).abs() < 1e-14);
    }

    #[test]
    fn sqrt_clips_tiny_negative_eigenvalues() {
        let m = M::diag_real(&[-5e-11, 0.25]);
        let r = psd_sqrt(&m, 1e-10).unwrap();
        assert_eq!(r[(0, 0)].re, 0.0);
        assert!((r[(1, 1)].re - 0.5).abs() < 1e-15);
        assert!(matches!(psd_sqrt(&M::diag_real(&[-1e-9, 1.0]), 1e-10), Err(Error::NotPsd { .. })));
    }

    #[test]
    fn single_precision_decomposition() {
        let m = ComplexMatrix::<f32>::from_real(2, 2, &[2.0, 1.0, 1.0, 2.0]).unwrap();
        let eig = eig_hermitian(&m, 1e-5).unwrap();
        assert!((eig.values[0] - 1.0).abs() < 1e-5);
        assert!((eig.values[1] - 3.0).abs() < 1e-5);
    }
}
