use serde::{Deserialize, Serialize};

use crate::circuit::KerrProbeModel;
use crate::error::{Error, Result};
use crate::linalg::{Ket, C};
use crate::povm::Prior;
use crate::states::{LabeledBasis, QubitPair};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Average the exact outcome distribution of every trial.
    ExactAmplitude,
    /// Draw one click per trial from that distribution.
    SampledBranches,
}

/// Which network turns the prepared photon into clicks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Pathway {
    /// The two-branch network when the prior is unbiased, else the generic
    /// dilation.
    Auto,
    /// Always the 16-port dilation with readout.
    Generic,
}

/// Where the unknown pair comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PairSource {
    /// Fresh Haar-random qubits every trial.
    Haar,
    /// The same pair every trial, as `[re0, im0, re1, im1]`.
    Fixed { psi1: [f64; 4], psi2: [f64; 4] },
}

impl PairSource {
    /// `psi1 = |H>`, `psi2 = |V>`.
    pub fn computational() -> Self {
        PairSource::Fixed { psi1: [1.0, 0.0, 0.0, 0.0], psi2: [0.0, 0.0, 1.0, 0.0] }
    }

    pub fn fixed_pair(&self) -> Result<Option<QubitPair<f64>>> {
        match self {
            PairSource::Haar => Ok(None),
            PairSource::Fixed { psi1, psi2 } => {
                let ket = |a: &[f64; 4]| {
                    Ket::new(vec![C::new(a[0], a[1]), C::new(a[2], a[3])], LabeledBasis::polarization("q"))
                };
                Ok(Some(QubitPair::new(ket(psi1)?, ket(psi2)?)?))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub trials: usize,
    /// Prior the measurement is optimized for.
    pub prior: Prior,
    /// Probability that a trial's data photon is `psi1`; defaults to the
    /// measurement prior (1/2 for minimax).
    pub data_prior: Option<f64>,
    pub seed: u64,
    pub kerr: KerrProbeModel,
    pub mode: Mode,
    pub pathway: Pathway,
    pub pairs: PairSource,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            trials: 100_000,
            prior: Prior::Minimax,
            data_prior: None,
            seed: 0,
            kerr: KerrProbeModel::IDEAL,
            mode: Mode::ExactAmplitude,
            pathway: Pathway::Auto,
            pairs: PairSource::Haar,
        }
    }
}

impl ExperimentConfig {
    pub fn data_prior(&self) -> f64 {
        self.data_prior.unwrap_or_else(|| self.prior.default_data_prior())
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidConfig("trials must be at least 1".into()));
        }
        let probabilities = [self.prior.eta1(), self.data_prior];
        for p in probabilities.into_iter().flatten() {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidConfig(format!("probability {p} outside [0, 1]")));
            }
        }
        self.pairs.fixed_pair()?;
        if let crate::circuit::KerrMode::Physical = self.kerr.mode {
            KerrProbeModel::physical(self.kerr.alpha, self.kerr.theta)?;
        }
        Ok(())
    }

    /// Whether the two-branch network is used.
    pub fn uses_two_branch_network(&self) -> bool {
        self.pathway == Pathway::Auto && self.prior.eta1().is_none_or(|e| e == 0.5)
    }
}
