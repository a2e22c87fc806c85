use super::{neumark_dilation, DetectorDistribution, Discriminator, DETECTORS};
use crate::error::{Error, Result};
use crate::linalg::{eig_hermitian, ComplexMatrix, Ket, Real, C};
use crate::povm::Povm;

/// Rail indices grouped by the number of `1` digits. The elements of every
/// optimal POVM preserve this weight.
const SECTORS: [&[usize]; 4] = [&[0], &[1, 2, 4], &[3, 5, 6], &[7]];

/// Sixteen-port realization of an arbitrary optimal POVM: the dilation of
/// the full `Pi0` followed by a readout on the conclusive half.
///
/// With `S = Pi1 + Pi2` and `Q_k = S^{+1/2} Pi_k S^{+1/2}`, the readout rows
/// are eigenvectors of `Q1 - Q2` taken sector by sector. Eigenvalue `+1`
/// ports fire only for `psi1`, eigenvalue `-1` ports only for `psi2`.
#[derive(Debug, Clone, PartialEq)]
pub struct NeumarkMeasurement<T: Real = f64> {
    pub module: ComplexMatrix<T>,
    pub readout: ComplexMatrix<T>,
    /// Output index of `C1..C4`.
    pub detector_ports: [usize; 4],
    unitary: ComplexMatrix<T>,
}

impl<T: Real> NeumarkMeasurement<T> {
    pub fn new(povm: &Povm<T>, tol: T) -> Result<Self> {
        if povm.pi0.rows() != 8 {
            return Err(Error::DimensionMismatch { expected: 8, found: povm.pi0.rows() });
        }
        let module = neumark_dilation(&povm.pi0, tol)?;
        let s = &povm.pi1 + &povm.pi2;
        let inv_root = eig_hermitian(&s, tol)?.map_spectrum(|x| if x > tol { T::one() / x.sqrt() } else { T::zero() });
        let q1 = &(&inv_root * &povm.pi1) * &inv_root;
        let q2 = &(&inv_root * &povm.pi2) * &inv_root;
        let split = &q1 - &q2;

        let mut readout = ComplexMatrix::zeros(8, 8);
        for idx in SECTORS {
            let eig = eig_hermitian(&split.select(idx, idx), tol)?;
            for (slot, k) in (0..idx.len()).rev().enumerate() {
                let v = eig.vector(k);
                for (j, &col) in idx.iter().enumerate() {
                    readout[(idx[slot], col)] = v[j].conj();
                }
            }
        }
        let [w1, w2] = [SECTORS[1], SECTORS[2]];
        let detector_ports = [w1[0], w1[2], w2[0], w2[2]];
        let unitary = &readout.direct_sum(&ComplexMatrix::identity(8)) * &module;
        Ok(Self { module, readout, detector_ports, unitary })
    }

    /// Assembled 16-port unitary: dilation then readout.
    pub fn unitary(&self) -> &ComplexMatrix<T> {
        &self.unitary
    }

    pub fn terminal_names(&self) -> Vec<String> {
        (0..16)
            .map(|k| match self.detector_ports.iter().position(|&p| p == k) {
                Some(d) => DETECTORS[d].to_string(),
                None if k < 8 => format!("conclusive.{k}"),
                None => format!("inconclusive.{}", k - 8),
            })
            .collect()
    }
}

impl<T: Real> Discriminator<T> for NeumarkMeasurement<T> {
    fn distribution(&self, input: &Ket<T>) -> Result<DetectorDistribution<T>> {
        if input.dim() != 8 {
            return Err(Error::DimensionMismatch { expected: 8, found: input.dim() });
        }
        let mut x = input.amplitudes().to_vec();
        x.resize(16, C::new(T::zero(), T::zero()));
        let probs: Vec<T> = self.unitary.apply(&x).iter().map(|a| a.norm_sqr()).collect();
        let detectors = self.detector_ports.map(|p| probs[p]);
        Ok(DetectorDistribution { detectors, terminals: self.terminal_names().into_iter().zip(probs).collect() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::povm::{optimal_povm, success_probability, Prior};
    use crate::states::{encode_multirail, haar_qubit, Hypothesis, QubitPair};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn every_regime_is_realized_exactly() {
        let mut rng = ChaCha8Rng::seed_from_u64(40);
        let pairs: Vec<QubitPair<f64>> = (0..50).map(|_| QubitPair::new(haar_qubit(&mut rng), haar_qubit(&mut rng)).unwrap()).collect();
        for prior in [Prior::Minimax, Prior::Bayesian(0.1), Prior::Bayesian(0.2), Prior::Bayesian(0.35), Prior::Bayesian(0.8), Prior::Bayesian(0.95)] {
            let povm = optimal_povm::<f64>(prior).unwrap();
            let m = NeumarkMeasurement::new(&povm, 1e-10).unwrap();
            assert!(m.unitary().unitary_residual() < 1e-10, "{prior:?}");
            assert!(m.readout.unitary_residual() < 1e-10);
            for pair in &pairs {
                for i in Hypothesis::BOTH {
                    let d = m.distribution(&encode_multirail(pair, i)).unwrap();
                    assert!(d.conclusive(i.other()) < 1e-10, "{prior:?}");
                    assert!((d.conclusive(i) - success_probability(&povm, pair, i)).abs() < 1e-10, "{prior:?}");
                    assert!((d.total() - 1.0).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn pvm_regime_silences_second_detectors() {
        let povm = optimal_povm::<f64>(Prior::Bayesian(0.9)).unwrap();
        let m = NeumarkMeasurement::new(&povm, 1e-10).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let pair = QubitPair::new(haar_qubit(&mut rng), haar_qubit(&mut rng)).unwrap();
        let d = m.distribution(&encode_multirail(&pair, Hypothesis::Psi2)).unwrap();
        assert!(d.detectors[1] < 1e-14 && d.detectors[3] < 1e-14, "{:?}", d.detectors);
    }

    #[test]
    fn names_cover_all_ports() {
        let m = NeumarkMeasurement::new(&optimal_povm::<f64>(Prior::Minimax).unwrap(), 1e-10).unwrap();
        let names = m.terminal_names();
        assert_eq!(names.len(), 16);
        assert_eq!(names[1], "C1");
        assert_eq!(names[6], "C4");
        assert_eq!(names[15], "inconclusive.7");
    }
}
