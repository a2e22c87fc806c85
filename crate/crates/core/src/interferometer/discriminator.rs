use std::collections::BTreeMap;

use super::{build_v_maps, neumark_dilation, transported_basis, DetectorDistribution, Discriminator, DETECTORS};
use crate::error::{Error, Result};
use crate::linalg::{eig_hermitian, ComplexMatrix, Ket, Real, C};
use crate::povm::{optimal_povm, residual_pi0_blocks, Prior};

/// Default structural tolerance for this module, as the scalar type.
fn tol<T: Real>() -> T {
    T::lit(crate::linalg::STRUCTURAL_TOL)
}

/// Two-branch network for the unbiased case: PBS rails, `V1`/`V2`, per
/// branch a diagonalizing splitter `u_diag`, a dilation `u_ext` against two
/// vacuum ancillas and a final 50-50 splitter.
///
/// Internally the network is one 12-port unitary. Inputs are the eight rails
/// followed by the four ancillas. Outputs are the twelve terminals listed by
/// [`DiscriminatorNetwork::terminals`].
#[derive(Debug, Clone, PartialEq)]
pub struct DiscriminatorNetwork<T: Real = f64> {
    pub v1: ComplexMatrix<T>,
    pub v2: ComplexMatrix<T>,
    pub u_diag: [ComplexMatrix<T>; 2],
    pub u_ext: [ComplexMatrix<T>; 2],
    pub final_bs: ComplexMatrix<T>,
    /// Detector label to terminal index.
    pub detector_map: BTreeMap<String, usize>,
    terminals: Vec<String>,
    unitary: ComplexMatrix<T>,
}

/// Unitary `U` with `U B U^dagger = diag(lambda_max, lambda_min)`.
///
/// The first row is the conjugated eigenvector of the larger eigenvalue,
/// phased so its second entry is real and nonnegative; the second row is
/// `(v_2, -v_1)`.
pub fn diagonalizer<T: Real>(block: &ComplexMatrix<T>, tol: T) -> Result<(ComplexMatrix<T>, [T; 2])> {
    if block.rows() != 2 || block.cols() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: block.rows() });
    }
    let eig = eig_hermitian(block, tol)?;
    let mut v = eig.vector(1);
    let anchor = if v[1].norm() > T::lit(1e-14) { v[1] } else { v[0] };
    let rot = anchor.conj() / anchor.norm();
    for x in &mut v {
        *x *= rot;
    }
    let u = ComplexMatrix::new(2, 2, vec![v[0].conj(), v[1].conj(), v[1], -v[0]])?;
    Ok((u, [eig.values[1], eig.values[0]]))
}

fn embed<T: Real>(m: &ComplexMatrix<T>, modes: &[usize], n: usize) -> ComplexMatrix<T> {
    let mut out = ComplexMatrix::identity(n);
    for (r, &i) in modes.iter().enumerate() {
        for (c, &j) in modes.iter().enumerate() {
            out[(i, j)] = m[(r, c)];
        }
    }
    out
}

/// Internal modes of branch `b`: two signal modes then two ancillas.
fn branch_modes(b: usize) -> [usize; 4] {
    [2 * b, 2 * b + 1, 8 + 2 * b, 9 + 2 * b]
}

fn terminal_names() -> Vec<String> {
    let mut names = vec![String::new(); 12];
    for b in 0..2 {
        for (k, m) in branch_modes(b).into_iter().enumerate() {
            names[m] = format!("U{}.out{k}", b + 1);
        }
    }
    names[4] = "V1.out2".into();
    names[5] = "V2.out2".into();
    names[6] = "PBS.0_D|0_A|H".into();
    names[7] = "PBS.1_D|1_A|V".into();
    names
}

/// Leading eigenvector of a 2x2 PSD block.
fn top_vector<T: Real>(m: &ComplexMatrix<T>) -> Result<Vec<C<T>>> {
    Ok(eig_hermitian(m, tol())?.vector(1))
}

impl<T: Real> DiscriminatorNetwork<T> {
    /// Builds the network from the inconclusive blocks of the two branches.
    /// Each branch's `psi1` detector is the final-splitter port that the
    /// minimax `Pi2` direction cannot reach.
    pub fn from_blocks(block1: &ComplexMatrix<T>, block2: &ComplexMatrix<T>) -> Result<Self> {
        let (v1, v2) = build_v_maps::<T>();
        let r = T::FRAC_1_SQRT_2();
        let final_bs = ComplexMatrix::new(2, 2, vec![C::new(r, T::zero()), C::new(r, T::zero()), C::new(r, T::zero()), C::new(-r, T::zero())])?;
        let minimax = optimal_povm::<T>(Prior::Minimax)?;
        let w = transported_basis::<T>();
        let pi2_t = &(&w * &minimax.pi2) * &w.adjoint();

        let mut u_diag = Vec::with_capacity(2);
        let mut u_ext = Vec::with_capacity(2);
        let mut unitary = ComplexMatrix::zeros(12, 12);
        unitary.set_block(0, 0, &w);
        unitary.set_block(8, 8, &ComplexMatrix::identity(4));
        let mut detector_map = BTreeMap::new();
        for (b, block) in [block1, block2].into_iter().enumerate() {
            let (ud, lambda) = diagonalizer(block, tol())?;
            let ue = neumark_dilation(&ComplexMatrix::diag_real(&lambda), tol())?;
            let package = &(&embed(&final_bs, &[0, 1], 4) * &ue) * &embed(&ud, &[0, 1], 4);
            let modes = branch_modes(b);
            unitary = &embed(&package, &modes, 12) * &unitary;

            let chi = top_vector(&pi2_t.block(2 * b, 2 * b, 2, 2))?;
            let reach: Vec<T> = (0..2).map(|p| (package[(p, 0)] * chi[0] + package[(p, 1)] * chi[1]).norm()).collect();
            let psi1_port = if reach[0] <= reach[1] { 0 } else { 1 };
            detector_map.insert(DETECTORS[2 * b].to_string(), modes[psi1_port]);
            detector_map.insert(DETECTORS[2 * b + 1].to_string(), modes[1 - psi1_port]);
            u_diag.push(ud);
            u_ext.push(ue);
        }
        let [d0, d1]: [ComplexMatrix<T>; 2] = u_diag.try_into().expect("two branches");
        let [e0, e1]: [ComplexMatrix<T>; 2] = u_ext.try_into().expect("two branches");
        Ok(Self { v1, v2, u_diag: [d0, d1], u_ext: [e0, e1], final_bs, detector_map, terminals: terminal_names(), unitary })
    }

    /// Terminal names in output order.
    pub fn terminals(&self) -> &[String] {
        &self.terminals
    }

    /// End-to-end 12-port unitary.
    pub fn unitary(&self) -> &ComplexMatrix<T> {
        &self.unitary
    }

    /// `final_bs · u_ext · u_diag` of branch `b` on (signal, signal,
    /// ancilla, ancilla).
    pub fn branch_package(&self, b: usize) -> ComplexMatrix<T> {
        &(&embed(&self.final_bs, &[0, 1], 4) * &self.u_ext[b]) * &embed(&self.u_diag[b], &[0, 1], 4)
    }

    pub fn detector_terminal(&self, label: &str) -> Option<usize> {
        self.detector_map.get(label).copied()
    }
}

/// The network for `eta1 = 1/2`, built from the residual inconclusive
/// operator of the minimax measurement.
pub fn build_discriminator<T: Real>(eta1: f64) -> Result<DiscriminatorNetwork<T>> {
    if (eta1 - 0.5).abs() > 1e-12 {
        return Err(Error::UnsupportedEta(eta1));
    }
    let povm = optimal_povm::<T>(Prior::Minimax)?;
    let blocks = residual_pi0_blocks(&povm);
    DiscriminatorNetwork::from_blocks(&blocks.block1, &blocks.block2)
}

/// Propagates a rail-basis photon (ancillas in vacuum) through the network.
pub fn detector_distribution<T: Real>(net: &DiscriminatorNetwork<T>, input: &Ket<T>) -> Result<DetectorDistribution<T>> {
    if input.dim() != 8 {
        return Err(Error::DimensionMismatch { expected: 8, found: input.dim() });
    }
    let mut x = input.amplitudes().to_vec();
    x.resize(12, C::new(T::zero(), T::zero()));
    let out = net.unitary.apply(&x);
    let probs: Vec<T> = out.iter().map(|a| a.norm_sqr()).collect();
    let detectors = [0, 1, 2, 3].map(|k| probs[net.detector_map[DETECTORS[k]]]);
    let terminals = net.terminals.iter().cloned().zip(probs).collect();
    Ok(DetectorDistribution { detectors, terminals })
}

impl<T: Real> Discriminator<T> for DiscriminatorNetwork<T> {
    fn distribution(&self, input: &Ket<T>) -> Result<DetectorDistribution<T>> {
        detector_distribution(self, input)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interferometer::{reck_decompose, NeumarkMeasurement};
    use crate::povm::{pi0_blocks, success_probability};
    use crate::states::{encode_multirail, haar_qubit, Hypothesis, QubitPair};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn sq(x: f64) -> f64 {
        x.sqrt()
    }

    fn random_pairs(seed: u64, n: usize) -> Vec<QubitPair<f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| QubitPair::new(haar_qubit(&mut rng), haar_qubit(&mut rng)).unwrap()).collect()
    }

    #[test]
    fn printed_block_gives_printed_matrices() {
        let b = pi0_blocks::<f64>(0.5).unwrap();
        let net = DiscriminatorNetwork::from_blocks(&b.block1, &b.block2).unwrap();
        let r = 0.5f64.sqrt();
        let want = ComplexMatrix::from_real(2, 2, &[-r, r, r, r]).unwrap();
        let s = 3f64.sqrt() / 6.0;
        let (a, bb, c, d) = (sq(1.0 / 3.0 - s), sq(1.0 / 3.0 + s), sq(2.0 / 3.0 + s), sq(2.0 / 3.0 - s));
        #[rustfmt::skip]
        let ext = ComplexMatrix::from_real(4, 4, &[
            a, 0.0, -c, 0.0,
            0.0, bb, 0.0, -d,
            c, 0.0, a, 0.0,
            0.0, d, 0.0, bb,
        ]).unwrap();
        for k in 0..2 {
            assert!(net.u_diag[k].max_abs_diff(&want) < 1e-15);
            assert!(net.u_ext[k].max_abs_diff(&ext) < 1e-14);
            let conj = &(&net.u_diag[k] * &b.block1) * &net.u_diag[k].adjoint();
            assert!(conj.max_abs_diff(&ComplexMatrix::diag_real(&[2.0 / 3.0 + s, 2.0 / 3.0 - s])) < 1e-15);
        }
    }

    #[test]
    fn components_are_unitary_and_sparse() {
        let net = build_discriminator::<f64>(0.5).unwrap();
        for m in [&net.v1, &net.v2, &net.u_diag[0], &net.u_diag[1], &net.u_ext[0], &net.u_ext[1], &net.final_bs, net.unitary()] {
            assert!(m.unitary_residual() < 1e-10);
        }
        for b in 0..2 {
            assert_eq!(reck_decompose(&net.u_diag[b], 1e-10).unwrap().splitter_count(), 1);
            // u_ext couples mode k only to ancilla k: two splitters.
            let paired = net.u_ext[b].select(&[0, 2, 1, 3], &[0, 2, 1, 3]);
            assert!(paired.block(0, 2, 2, 2).max_abs() < 1e-15 && paired.block(2, 0, 2, 2).max_abs() < 1e-15);
            for k in 0..2 {
                assert!(reck_decompose(&paired.block(2 * k, 2 * k, 2, 2), 1e-10).unwrap().splitter_count() <= 1);
            }
        }
        assert_eq!(net.terminals().len(), 12);
        assert!(matches!(build_discriminator::<f64>(0.3), Err(Error::UnsupportedEta(_))));
    }

    #[test]
    fn network_reproduces_minimax_povm() {
        let net = build_discriminator::<f64>(0.5).unwrap();
        let povm = optimal_povm::<f64>(Prior::Minimax).unwrap();
        for pair in random_pairs(30, 300) {
            for i in Hypothesis::BOTH {
                let d = detector_distribution(&net, &encode_multirail(&pair, i)).unwrap();
                assert!(d.conclusive(i.other()) < 1e-10);
                assert!((d.conclusive(i) - success_probability(&povm, &pair, i)).abs() < 1e-10);
                assert!((d.total() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn agrees_with_generic_dilation() {
        let net = build_discriminator::<f64>(0.5).unwrap();
        let generic = NeumarkMeasurement::new(&optimal_povm::<f64>(Prior::Minimax).unwrap(), 1e-10).unwrap();
        for pair in random_pairs(31, 100) {
            for i in Hypothesis::BOTH {
                let input = encode_multirail(&pair, i);
                let a = detector_distribution(&net, &input).unwrap();
                let b = generic.distribution(&input).unwrap();
                for k in 0..4 {
                    assert!((a.detectors[k] - b.detectors[k]).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn ancillas_start_dark_and_wrong_dimension_fails() {
        let net = build_discriminator::<f64>(0.5).unwrap();
        let bad = Ket::basis_state(0, crate::states::LabeledBasis::anonymous(4)).unwrap();
        assert_eq!(detector_distribution(&net, &bad), Err(Error::DimensionMismatch { expected: 8, found: 4 }));
        // A photon on the always-inconclusive rail never reaches a detector.
        let h3 = Ket::basis_state(0, crate::states::LabeledBasis::rail()).unwrap();
        let d = detector_distribution(&net, &h3).unwrap();
        assert!(d.detectors.iter().all(|&p| p == 0.0));
        assert_eq!(d.terminals[6].1, 1.0);
    }

    #[test]
    fn printed_block_network_is_not_unambiguous() {
        let b = pi0_blocks::<f64>(0.5).unwrap();
        let net = DiscriminatorNetwork::from_blocks(&b.block1, &b.block2).unwrap();
        let worst = random_pairs(32, 50)
            .iter()
            .map(|p| detector_distribution(&net, &encode_multirail(p, Hypothesis::Psi1)).unwrap().conclusive(Hypothesis::Psi2))
            .fold(0.0, f64::max);
        assert!(worst > 1e-3);
    }
}
