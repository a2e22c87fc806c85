//! Quantum states used by the discriminator: unknown qubits, symmetric
//! triple-photon inputs, Bell states and the 8-rail single-photon encoding.

mod basis;

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

pub use basis::{rail_track_name, LabeledBasis, Slot};

use crate::error::{Error, Result};
use crate::linalg::{Ket, Real, Tensor, C, NORMALIZATION_TOL};

/// Minimum `|det[psi1 psi2]|` for a pair to count as linearly independent.
pub const INDEPENDENCE_FLOOR: f64 = 1e-9;

/// Which unknown state the data photon carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Hypothesis {
    Psi1,
    Psi2,
}

impl Hypothesis {
    pub const BOTH: [Hypothesis; 2] = [Hypothesis::Psi1, Hypothesis::Psi2];

    /// 1 or 2.
    pub fn number(self) -> usize {
        match self {
            Hypothesis::Psi1 => 1,
            Hypothesis::Psi2 => 2,
        }
    }

    pub fn other(self) -> Self {
        match self {
            Hypothesis::Psi1 => Hypothesis::Psi2,
            Hypothesis::Psi2 => Hypothesis::Psi1,
        }
    }

    pub fn from_number(i: usize) -> Result<Self> {
        match i {
            1 => Ok(Hypothesis::Psi1),
            2 => Ok(Hypothesis::Psi2),
            _ => Err(Error::InvalidConfig(format!("hypothesis index must be 1 or 2, got {i}"))),
        }
    }
}

/// Two unknown polarization qubits `psi1`, `psi2`.
#[derive(Debug, Clone, PartialEq)]
pub struct QubitPair<T: Real = f64> {
    psi1: Ket<T>,
    psi2: Ket<T>,
    overlap: C<T>,
}

impl<T: Real> QubitPair<T> {
    /// Checks normalization and linear independence.
    pub fn new(psi1: Ket<T>, psi2: Ket<T>) -> Result<Self> {
        let pair = Self::unchecked(psi1, psi2)?;
        for k in [&pair.psi1, &pair.psi2] {
            if !k.is_normalized(T::lit(NORMALIZATION_TOL)) {
                return Err(Error::NotNormalized { norm_sqr: k.norm_sqr().as_f64() });
            }
        }
        let det = pair.det().norm();
        if det <= T::lit(INDEPENDENCE_FLOOR) {
            return Err(Error::LinearlyDependent { det: det.as_f64() });
        }
        Ok(pair)
    }

    /// Pair without the normalization and independence checks, for
    /// degenerate cases such as `psi1 = psi2 = |H>`.
    pub fn unchecked(psi1: Ket<T>, psi2: Ket<T>) -> Result<Self> {
        for k in [&psi1, &psi2] {
            if k.dim() != 2 {
                return Err(Error::DimensionMismatch { expected: 2, found: k.dim() });
            }
        }
        let psi1 = psi1.relabel(LabeledBasis::polarization("q"))?;
        let psi2 = psi2.relabel(LabeledBasis::polarization("q"))?;
        let overlap = psi1.inner(&psi2);
        Ok(Self { psi1, psi2, overlap })
    }

    /// Pair from `(alpha, beta)` amplitudes.
    pub fn from_amplitudes(psi1: [C<T>; 2], psi2: [C<T>; 2]) -> Result<Self> {
        let q = || LabeledBasis::polarization("q");
        Self::new(Ket::unnormalized(psi1.to_vec(), q())?, Ket::unnormalized(psi2.to_vec(), q())?)
    }

    pub fn psi1(&self) -> &Ket<T> {
        &self.psi1
    }

    pub fn psi2(&self) -> &Ket<T> {
        &self.psi2
    }

    pub fn data(&self, i: Hypothesis) -> &Ket<T> {
        match i {
            Hypothesis::Psi1 => &self.psi1,
            Hypothesis::Psi2 => &self.psi2,
        }
    }

    /// `<psi1|psi2>`.
    pub fn overlap(&self) -> C<T> {
        self.overlap
    }

    /// `alpha1 beta2 - beta1 alpha2`.
    pub fn det(&self) -> C<T> {
        let a = self.psi1.amplitudes();
        let b = self.psi2.amplitudes();
        a[0] * b[1] - a[1] * b[0]
    }
}

/// Haar-random qubit, gauge-fixed so its first nonzero amplitude is real and
/// nonnegative.
pub fn haar_qubit<T: Real, R: Rng + ?Sized>(rng: &mut R) -> Ket<T> {
    loop {
        let z: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
        let n = z.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n == 0.0 {
            continue;
        }
        let amps = vec![C::new(T::lit(z[0] / n), T::lit(z[1] / n)), C::new(T::lit(z[2] / n), T::lit(z[3] / n))];
        let ket = Ket::unnormalized(amps, LabeledBasis::polarization("q"))
            .and_then(Ket::normalize)
            .expect("nonzero gaussian vector normalizes");
        return ket.gauge_fixed();
    }
}

/// The four Bell states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BellKind {
    PhiPlus,
    PsiPlus,
    PsiMinus,
    PhiMinus,
}

impl BellKind {
    /// Outcome order used for sampling and enumeration.
    pub const ALL: [BellKind; 4] = [BellKind::PhiPlus, BellKind::PsiPlus, BellKind::PsiMinus, BellKind::PhiMinus];

    pub fn label(self) -> &'static str {
        match self {
            BellKind::PhiPlus => "phi+",
            BellKind::PsiPlus => "psi+",
            BellKind::PsiMinus => "psi-",
            BellKind::PhiMinus => "phi-",
        }
    }

    /// Amplitudes over `|00>, |01>, |10>, |11>` before the `1/sqrt(2)`.
    fn pattern(self) -> [f64; 4] {
        match self {
            BellKind::PhiPlus => [1.0, 0.0, 0.0, 1.0],
            BellKind::PhiMinus => [1.0, 0.0, 0.0, -1.0],
            BellKind::PsiPlus => [0.0, 1.0, 1.0, 0.0],
            BellKind::PsiMinus => [0.0, 1.0, -1.0, 0.0],
        }
    }

    /// Unnormalized-free amplitudes `pattern / sqrt(2)`.
    pub fn amplitudes<T: Real>(self) -> [C<T>; 4] {
        let s = T::FRAC_1_SQRT_2();
        self.pattern().map(|x| C::new(T::lit(x) * s, T::zero()))
    }
}

impl fmt::Display for BellKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for BellKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "phi+" | "Phi+" => Ok(BellKind::PhiPlus),
            "phi-" | "Phi-" => Ok(BellKind::PhiMinus),
            "psi+" | "Psi+" => Ok(BellKind::PsiPlus),
            "psi-" | "Psi-" => Ok(BellKind::PsiMinus),
            other => Err(Error::UnknownOutcomeLabel(other.to_string())),
        }
    }
}

/// Bell state over two two-level slots, e.g. `{H,V} x {0_A,1_A}`.
pub fn bell_state<T: Real>(kind: BellKind, basis0: &LabeledBasis, basis1: &LabeledBasis) -> Result<Ket<T>> {
    for b in [basis0, basis1] {
        if b.dim() != 2 {
            return Err(Error::DimensionMismatch { expected: 2, found: b.dim() });
        }
    }
    Ket::new(kind.amplitudes().to_vec(), basis0.concat(basis1))
}

/// The three `Phi+` teleportation resources: polarization-polarization,
/// polarization-`A` action and polarization-`B` action.
pub fn entangled_resources<T: Real>() -> Result<[Ket<T>; 3]> {
    Ok([
        bell_state(BellKind::PhiPlus, &LabeledBasis::polarization("B"), &LabeledBasis::polarization("C"))?,
        bell_state(BellKind::PhiPlus, &LabeledBasis::polarization("A"), &LabeledBasis::qubit("a", "0_A", "1_A"))?,
        bell_state(BellKind::PhiPlus, &LabeledBasis::polarization("D"), &LabeledBasis::qubit("b", "0_B", "1_B"))?,
    ])
}

/// `|psi1>_1 |psi2>_2 |psi_i>_3`.
pub fn triple_input<T: Real>(pair: &QubitPair<T>, i: Hypothesis) -> Ket<T> {
    let amps = pair
        .psi1()
        .tensor(pair.psi2())
        .tensor(pair.data(i))
        .into_amplitudes();
    Ket::unnormalized(amps, LabeledBasis::triple_photon()).expect("dimension 8")
}

/// Single photon on eight rails: `psi1` on the `D` action, `psi2` on the `A`
/// action and `psi_i` on the polarization, amplitude at `4d + 2a + p`.
pub fn encode_multirail<T: Real>(pair: &QubitPair<T>, i: Hypothesis) -> Ket<T> {
    let (x, y, z) = (pair.psi1().amplitudes(), pair.psi2().amplitudes(), pair.data(i).amplitudes());
    let mut amps = vec![C::new(T::zero(), T::zero()); 8];
    for d in 0..2 {
        for a in 0..2 {
            for p in 0..2 {
                amps[4 * d + 2 * a + p] = x[d] * y[a] * z[p];
            }
        }
    }
    Ket::unnormalized(amps, LabeledBasis::rail()).expect("dimension 8")
}

/// Rail index of a triple-photon basis index `(j, k, l) -> (d=j, a=k, p=l)`.
pub fn tensor_to_rail_index(index: usize) -> usize {
    let triple = LabeledBasis::triple_photon();
    LabeledBasis::rail().index_of(&triple.digits(index))
}

/// Carries a triple-photon ket over to the rail basis.
pub fn tensor_to_rail<T: Real>(ket: &Ket<T>) -> Result<Ket<T>> {
    if ket.dim() != 8 {
        return Err(Error::DimensionMismatch { expected: 8, found: ket.dim() });
    }
    let mut amps = vec![C::new(T::zero(), T::zero()); 8];
    for (idx, &a) in ket.amplitudes().iter().enumerate() {
        amps[tensor_to_rail_index(idx)] = a;
    }
    Ket::unnormalized(amps, LabeledBasis::rail())
}
