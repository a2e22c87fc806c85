use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KerrMode {
    /// Parity read out perfectly; `alpha` and `theta` are ignored.
    Ideal,
    /// Homodyne readout of the probe with unit vacuum variance.
    Physical,
}

/// Coherent probe `|alpha>` picking up a cross-Kerr phase `theta` per
/// signal photon.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KerrProbeModel {
    pub alpha: f64,
    pub theta: f64,
    pub mode: KerrMode,
}

impl KerrProbeModel {
    pub const IDEAL: Self = Self { alpha: 0.0, theta: 0.0, mode: KerrMode::Ideal };

    pub fn physical(alpha: f64, theta: f64) -> Result<Self> {
        if !(alpha >= 0.0) || !alpha.is_finite() || !theta.is_finite() {
            return Err(Error::InvalidConfig(format!("kerr probe needs finite alpha >= 0 and theta (got {alpha}, {theta})")));
        }
        Ok(Self { alpha, theta, mode: KerrMode::Physical })
    }

    /// Mean homodyne quadrature for an even (`|alpha>`) or odd
    /// (`|alpha e^{±i theta}>`) signal.
    pub fn quadrature_mean(&self, odd: bool) -> f64 {
        if odd {
            2.0 * self.alpha * self.theta.cos()
        } else {
            2.0 * self.alpha
        }
    }

    /// Midpoint between the two quadrature means.
    pub fn threshold(&self) -> f64 {
        0.5 * (self.quadrature_mean(false) + self.quadrature_mean(true))
    }

    /// Classifies a homodyne sample; `true` means odd parity.
    pub fn classify(&self, x: f64) -> bool {
        x < self.threshold()
    }

    /// `2 alpha (1 - cos theta)`.
    pub fn separation(&self) -> f64 {
        2.0 * self.alpha * (1.0 - self.theta.cos())
    }
}

/// Probability that a midpoint-threshold homodyne readout mistakes the
/// parity.
pub fn kerr_error_rate(model: &KerrProbeModel) -> Result<f64> {
    match model.mode {
        KerrMode::Ideal => Err(Error::IdealModelHasNoError),
        KerrMode::Physical => Ok(0.5 * libm::erfc(model.separation() / (2.0 * std::f64::consts::SQRT_2))),
    }
}
