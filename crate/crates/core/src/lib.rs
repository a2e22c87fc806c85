//! Exact-amplitude simulator for the universal unambiguous discriminator of
//! two completely unknown single-photon polarization qubits.
//!
//! The crate follows the whole optical pipeline:
//!
//! - [`states`]: unknown qubits, symmetric triple-photon inputs, Bell states
//!   and the 8-rail single-photon encoding.
//! - [`povm`]: the optimal unambiguous measurement for every prior regime,
//!   used as the oracle for everything downstream.
//! - [`circuit`]: CNOT, cross-Kerr parity QND with feedforward, path
//!   splitting, Bell analysis and Pauli restoration that turn three photons
//!   into one photon on eight rails.
//! - [`interferometer`]: Neumark dilation, the assembled two-branch
//!   discriminator network and a Reck beam-splitter compiler.
//! - [`harness`]: Monte Carlo driver and reports.
//!
//! Linear algebra, state construction, POVMs and the interferometer compiler
//! are generic over the real scalar ([`Real`], implemented for `f32` and
//! `f64`). The aliases below fix the scalar to `f64`, which is what the
//! pipeline and the harness use.

pub mod circuit;
pub mod error;
pub mod harness;
pub mod interferometer;
pub mod linalg;
pub mod povm;
pub mod states;

pub use error::{Error, Result};
pub use linalg::{Real, C};

/// Double precision complex matrix.
pub type Matrix = linalg::ComplexMatrix<f64>;
/// Single precision complex matrix.
pub type Matrix32 = linalg::ComplexMatrix<f32>;
/// Double precision labeled state vector.
pub type Ket = linalg::Ket<f64>;
/// Single precision labeled state vector.
pub type Ket32 = linalg::Ket<f32>;
/// Double precision qubit pair.
pub type QubitPair = states::QubitPair<f64>;
/// Double precision POVM.
pub type Povm = povm::Povm<f64>;
/// Double precision beam-splitter netlist.
pub type BeamSplitterNetwork = interferometer::BeamSplitterNetwork<f64>;
/// Double precision discriminator network.
pub type DiscriminatorNetwork = interferometer::DiscriminatorNetwork<f64>;
