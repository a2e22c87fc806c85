//! Dense complex linear algebra: matrices, labeled kets, Hermitian
//! eigendecomposition and PSD square roots.
//!
//! Every predicate takes its tolerance as an argument. The defaults used
//! throughout the crate are [`STRUCTURAL_TOL`] for structural checks
//! (Hermiticity, unitarity, positivity) and [`NORMALIZATION_TOL`] for state
//! norms.

mod eigen;
mod json;
mod ket;
mod matrix;
pub mod random;

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

pub use eigen::{eig_hermitian, psd_sqrt, HermitianEigen};
pub use json::{KetJson, MatrixJson};
pub use ket::{Ket, Tensor};
pub use matrix::ComplexMatrix;

/// Complex scalar over a real field `T`.
pub type C<T> = num_complex::Complex<T>;

/// Default tolerance for Hermiticity, unitarity and positivity checks.
pub const STRUCTURAL_TOL: f64 = 1e-10;
/// Default tolerance for state normalization.
pub const NORMALIZATION_TOL: f64 = 1e-12;

/// Real scalar the linear algebra is generic over.
pub trait Real:
    Float + FloatConst + FromPrimitive + NumAssign + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal into the scalar type.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar representable as f64")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex number from real and imaginary parts.
pub fn c<T: Real>(re: T, im: T) -> C<T> {
    C::new(re, im)
}

/// Purely real complex number.
pub fn re<T: Real>(x: T) -> C<T> {
    C::new(x, T::zero())
}
