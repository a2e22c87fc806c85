use super::{ComplexMatrix, Real, C, NORMALIZATION_TOL};
use crate::error::{Error, Result};
use crate::states::LabeledBasis;

/// Kronecker product of two operands of the same kind.
pub trait Tensor {
    fn tensor(&self, other: &Self) -> Self;
}

impl<T: Real> Tensor for ComplexMatrix<T> {
    fn tensor(&self, other: &Self) -> Self {
        self.kron(other)
    }
}

/// Amplitude vector tied to a labeled basis.
///
/// A ket built with [`Ket::new`] is normalized within
/// [`NORMALIZATION_TOL`]; [`Ket::unnormalized`] builds a flagged
/// intermediate that must go through [`Ket::normalize`] before it counts as a
/// state.
#[derive(Debug, Clone, PartialEq)]
pub struct Ket<T: Real = f64> {
    amplitudes: Vec<C<T>>,
    basis: LabeledBasis,
    normalized: bool,
}

impl<T: Real> Ket<T> {
    pub fn new(amplitudes: Vec<C<T>>, basis: LabeledBasis) -> Result<Self> {
        let ket = Self::unnormalized(amplitudes, basis)?;
        let n = ket.norm_sqr();
        if (n - T::one()).abs() > T::lit(NORMALIZATION_TOL) {
            return Err(Error::NotNormalized { norm_sqr: n.as_f64() });
        }
        Ok(Self { normalized: true, ..ket })
    }

    pub fn unnormalized(amplitudes: Vec<C<T>>, basis: LabeledBasis) -> Result<Self> {
        if amplitudes.len() != basis.dim() {
            return Err(Error::DimensionMismatch { expected: basis.dim(), found: amplitudes.len() });
        }
        Ok(Self { amplitudes, basis, normalized: false })
    }

    /// Normalized ket with real amplitudes given as `f64`.
    pub fn from_real(amplitudes: &[f64], basis: LabeledBasis) -> Result<Self> {
        Self::new(amplitudes.iter().map(|&x| C::new(T::lit(x), T::zero())).collect(), basis)
    }

    /// Computational basis vector `|index>`.
    pub fn basis_state(index: usize, basis: LabeledBasis) -> Result<Self> {
        let dim = basis.dim();
        if index >= dim {
            return Err(Error::DimensionMismatch { expected: dim, found: index });
        }
        let mut amps = vec![C::new(T::zero(), T::zero()); dim];
        amps[index] = C::new(T::one(), T::zero());
        Self::new(amps, basis)
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C<T>] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<C<T>> {
        self.amplitudes
    }

    pub fn basis(&self) -> &LabeledBasis {
        &self.basis
    }

    /// `false` for flagged intermediates.
    pub fn is_flagged_normalized(&self) -> bool {
        self.normalized
    }

    pub fn norm_sqr(&self) -> T {
        self.amplitudes.iter().fold(T::zero(), |s, a| s + a.norm_sqr())
    }

    pub fn is_normalized(&self, tol: T) -> bool {
        (self.norm_sqr() - T::one()).abs() <= tol
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Self) -> C<T> {
        assert_eq!(self.dim(), other.dim(), "inner product of kets with different dimensions");
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .fold(C::new(T::zero(), T::zero()), |s, (a, b)| s + a.conj() * b)
    }

    /// `|<self|other>|^2`.
    pub fn fidelity(&self, other: &Self) -> T {
        self.inner(other).norm_sqr()
    }

    pub fn normalize(self) -> Result<Self> {
        let n = self.norm_sqr();
        if !(n > T::zero()) {
            return Err(Error::NotNormalized { norm_sqr: n.as_f64() });
        }
        let inv = T::one() / n.sqrt();
        let amplitudes = self.amplitudes.into_iter().map(|a| a * inv).collect();
        Ok(Self { amplitudes, basis: self.basis, normalized: true })
    }

    /// Same amplitudes over another basis of equal dimension.
    pub fn relabel(self, basis: LabeledBasis) -> Result<Self> {
        if basis.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: basis.dim() });
        }
        Ok(Self { basis, ..self })
    }

    /// Multiplies every amplitude by `phase`.
    pub fn with_global_phase(self, phase: C<T>) -> Self {
        Self { amplitudes: self.amplitudes.into_iter().map(|a| a * phase).collect(), ..self }
    }

    /// Rotates the global phase so that the first nonzero amplitude is real
    /// and nonnegative.
    pub fn gauge_fixed(self) -> Self {
        let tiny = T::lit(1e-300).max(T::min_positive_value());
        match self.amplitudes.iter().find(|a| a.norm() > tiny) {
            Some(&a) => {
                let rot = a.conj() / a.norm();
                let mut out = self.with_global_phase(rot);
                if let Some(first) = out.amplitudes.iter_mut().find(|x| x.norm() > tiny) {
                    *first = C::new(first.re, T::zero());
                }
                out
            }
            None => self,
        }
    }

    pub fn label(&self, index: usize) -> String {
        self.basis.label(index)
    }
}

impl<T: Real> Tensor for Ket<T> {
    fn tensor(&self, other: &Self) -> Self {
        let mut amplitudes = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amplitudes {
            for b in &other.amplitudes {
                amplitudes.push(*a * *b);
            }
        }
        Self {
            amplitudes,
            basis: self.basis.concat(&other.basis),
            normalized: self.normalized && other.normalized,
        }
    }
}
