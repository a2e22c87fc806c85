//! Linear-optics compilation of the discrimination measurement.
//!
//! Two routes lead from the rail-encoded photon to detector clicks. The
//! dedicated two-branch network ([`DiscriminatorNetwork`]) separates the
//! rails with polarization splitters, rotates the two relevant
//! three-dimensional subspaces with `V1`/`V2`, diagonalizes the inconclusive
//! block, dilates it against vacuum ancillas and finishes each branch with a
//! 50-50 splitter. The generic route ([`NeumarkMeasurement`]) dilates the
//! full 8x8 `Pi0` into a 16-port module and adds a readout that sends each
//! conclusive outcome to its own detector. [`reck_decompose`] turns any of
//! these unitaries into a splitter/phase-shifter netlist.

mod discriminator;
mod generic;
mod neumark;
mod reck;
mod vmaps;

pub use discriminator::{build_discriminator, detector_distribution, diagonalizer, DiscriminatorNetwork};
pub use generic::NeumarkMeasurement;
pub use neumark::neumark_dilation;
pub use reck::{reck_decompose, reck_reconstruct, BeamSplitterNetwork, Element};
pub use vmaps::{build_v_maps, transported_basis, H1, H2, H3, H4};

use crate::error::Result;
use crate::linalg::{Ket, Real};
use crate::states::Hypothesis;

/// Detector labels in output order.
pub const DETECTORS: [&str; 4] = ["C1", "C2", "C3", "C4"];

/// Hypothesis announced by a click on detector `k` (0-based): `C1`, `C3`
/// mean `psi1`, `C2`, `C4` mean `psi2`.
pub fn announced(k: usize) -> Hypothesis {
    if k.is_multiple_of(2) {
        Hypothesis::Psi1
    } else {
        Hypothesis::Psi2
    }
}

/// Click probabilities at every output terminal of a network.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectorDistribution<T: Real = f64> {
    /// `C1..C4`.
    pub detectors: [T; 4],
    /// Every terminal, detectors included, by name.
    pub terminals: Vec<(String, T)>,
}

impl<T: Real> DetectorDistribution<T> {
    pub fn total(&self) -> T {
        self.terminals.iter().fold(T::zero(), |s, (_, p)| s + *p)
    }

    /// Probability of a photon at any non-detector terminal.
    pub fn inconclusive(&self) -> T {
        self.total() - self.detectors.iter().fold(T::zero(), |s, p| s + *p)
    }

    /// Probability that the network announces `h`.
    pub fn conclusive(&self, h: Hypothesis) -> T {
        (0..4).filter(|&k| announced(k) == h).fold(T::zero(), |s, k| s + self.detectors[k])
    }
}

/// Anything that maps a rail-encoded photon to detector probabilities.
pub trait Discriminator<T: Real> {
    fn distribution(&self, input: &Ket<T>) -> Result<DetectorDistribution<T>>;
}
