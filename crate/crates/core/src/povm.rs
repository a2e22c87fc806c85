//! Optimal unambiguous measurements on the symmetric triple-photon inputs.
//!
//! All operators live in the 8-dimensional tensor basis `1 ⊗ 2 ⊗ 3`, which
//! the rail bijection `(j,k,l) -> (d,a,p)` sends index-for-index onto the
//! canonical rail basis, so the same matrices act on the encoded single
//! photon.
//!
//! | `eta1`          | regime        | `Pi1` coefficient         | `Pi2` coefficient         |
//! |-----------------|---------------|---------------------------|---------------------------|
//! | `< 1/5`         | `PvmFavor2`   | 0                         | 1                         |
//! | `[1/5, 4/5]`    | `BayesianPovm`| `2/3 (2 - sqrt(eta2/eta1))` | `2/3 (2 - sqrt(eta1/eta2))` |
//! | `> 4/5`         | `PvmFavor1`   | 1                         | 0                         |
//! | no prior        | `Minimax`     | 2/3                       | 2/3                       |
//!
//! `Pi0` is always the residual `I - Pi1 - Pi2`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interferometer::transported_basis;
use crate::linalg::{ComplexMatrix, Real, C, STRUCTURAL_TOL};
use crate::states::{encode_multirail, triple_input, BellKind, Hypothesis, QubitPair};

pub const POVM_REGIME_LOW: f64 = 0.2;
pub const POVM_REGIME_HIGH: f64 = 0.8;

/// Prior information the measurement is optimized for.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Prior {
    /// Bayesian optimum for `P(psi1) = eta1`.
    Bayesian(f64),
    /// Minimax optimum, no prior.
    Minimax,
}

impl Prior {
    pub fn eta1(self) -> Option<f64> {
        match self {
            Prior::Bayesian(e) => Some(e),
            Prior::Minimax => None,
        }
    }

    /// Probability that the data is `psi1` when nothing else is said.
    pub fn default_data_prior(self) -> f64 {
        self.eta1().unwrap_or(0.5)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    BayesianPovm,
    #[serde(rename = "pvm-favor-1")]
    PvmFavor1,
    #[serde(rename = "pvm-favor-2")]
    PvmFavor2,
    Minimax,
}

impl Regime {
    pub fn name(self) -> &'static str {
        match self {
            Regime::BayesianPovm => "bayesian-povm",
            Regime::PvmFavor1 => "pvm-favor-1",
            Regime::PvmFavor2 => "pvm-favor-2",
            Regime::Minimax => "minimax",
        }
    }
}

/// Three-outcome measurement `{Pi1, Pi2, Pi0}` on the 8-dim input space.
#[derive(Debug, Clone, PartialEq)]
pub struct Povm<T: Real = f64> {
    pub pi1: ComplexMatrix<T>,
    pub pi2: ComplexMatrix<T>,
    pub pi0: ComplexMatrix<T>,
    pub regime: Regime,
    pub eta1: Option<f64>,
}

/// Measurement outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Outcome {
    Conclude(Hypothesis),
    Inconclusive,
}

impl<T: Real> Povm<T> {
    pub fn element(&self, outcome: Outcome) -> &ComplexMatrix<T> {
        match outcome {
            Outcome::Conclude(Hypothesis::Psi1) => &self.pi1,
            Outcome::Conclude(Hypothesis::Psi2) => &self.pi2,
            Outcome::Inconclusive => &self.pi0,
        }
    }

    /// Positivity of every element within `tol`.
    pub fn validate(&self, tol: T) -> Result<()> {
        for m in [&self.pi1, &self.pi2, &self.pi0] {
            if !m.is_psd(tol) {
                let min = crate::linalg::eig_hermitian(m, tol).map(|e| e.values[0].as_f64()).unwrap_or(f64::NAN);
                return Err(Error::NotPsd { min_eigenvalue: min });
            }
        }
        Ok(())
    }

    /// `||Pi1 - Pi1^2||`-free check that the elements sum to the identity.
    pub fn completeness_residual(&self) -> T {
        (&(&self.pi1 + &self.pi2) + &self.pi0).max_abs_diff(&ComplexMatrix::identity(8))
    }

    /// `<Psi_in|Pi_outcome|Psi_in>` for the data hypothesis `i`.
    pub fn probability(&self, outcome: Outcome, pair: &QubitPair<T>, i: Hypothesis) -> T {
        let psi = triple_input(pair, i);
        self.element(outcome).sandwich(psi.amplitudes(), psi.amplitudes()).re
    }

    /// Same expectation value evaluated on the rail encoding.
    pub fn probability_on_rails(&self, outcome: Outcome, pair: &QubitPair<T>, i: Hypothesis) -> T {
        let psi = encode_multirail(pair, i);
        self.element(outcome).sandwich(psi.amplitudes(), psi.amplitudes()).re
    }
}

/// `(Pi1, Pi2)` coefficients of the Bayesian POVM, without clamping.
pub fn bayesian_coefficients(eta1: f64) -> (f64, f64) {
    let eta2 = 1.0 - eta1;
    ((2.0 / 3.0) * (2.0 - (eta2 / eta1).sqrt()), (2.0 / 3.0) * (2.0 - (eta1 / eta2).sqrt()))
}

/// `I_1 ⊗ |Psi^as><Psi^as|` on photons 2 and 3.
pub fn antisymmetric_projector_23<T: Real>() -> ComplexMatrix<T> {
    let s = BellKind::PsiMinus.amplitudes::<T>();
    let p = ComplexMatrix::outer(&s, &s);
    ComplexMatrix::identity(2).kron(&p)
}

/// `I_2 ⊗ |Psi^as><Psi^as|` on photons 1 and 3.
pub fn antisymmetric_projector_13<T: Real>() -> ComplexMatrix<T> {
    let s = BellKind::PsiMinus.amplitudes::<T>();
    let p = ComplexMatrix::outer(&s, &s);
    ComplexMatrix::from_fn(8, 8, |r, c| {
        let (j, k, l) = (r >> 2, (r >> 1) & 1, r & 1);
        let (jj, kk, ll) = (c >> 2, (c >> 1) & 1, c & 1);
        if k == kk {
            p[(2 * j + l, 2 * jj + ll)]
        } else {
            C::new(T::zero(), T::zero())
        }
    })
}

/// Regime that [`optimal_povm`] selects for `prior`.
pub fn regime_for(prior: Prior) -> Result<Regime> {
    match prior {
        Prior::Minimax => Ok(Regime::Minimax),
        Prior::Bayesian(e) if !(0.0..=1.0).contains(&e) => Err(Error::InvalidProbability(e)),
        Prior::Bayesian(e) if e < POVM_REGIME_LOW => Ok(Regime::PvmFavor2),
        Prior::Bayesian(e) if e > POVM_REGIME_HIGH => Ok(Regime::PvmFavor1),
        Prior::Bayesian(_) => Ok(Regime::BayesianPovm),
    }
}

/// Optimal unambiguous POVM for `prior`.
pub fn optimal_povm<T: Real>(prior: Prior) -> Result<Povm<T>> {
    let regime = regime_for(prior)?;
    let (c1, c2) = match (regime, prior) {
        (Regime::Minimax, _) => (2.0 / 3.0, 2.0 / 3.0),
        (Regime::PvmFavor1, _) => (1.0, 0.0),
        (Regime::PvmFavor2, _) => (0.0, 1.0),
        (Regime::BayesianPovm, Prior::Bayesian(e)) => bayesian_coefficients(e),
        (Regime::BayesianPovm, Prior::Minimax) => unreachable!(),
    };
    Ok(povm_with_coefficients(c1, c2, regime, prior.eta1()))
}

/// `{c1 I⊗P_as(23), c2 I⊗P_as(13), residual}` for arbitrary coefficients.
pub fn povm_with_coefficients<T: Real>(c1: f64, c2: f64, regime: Regime, eta1: Option<f64>) -> Povm<T> {
    let pi1 = antisymmetric_projector_23::<T>().scale_real(T::lit(c1));
    let pi2 = antisymmetric_projector_13::<T>().scale_real(T::lit(c2));
    let pi0 = &(&ComplexMatrix::identity(8) - &pi1) - &pi2;
    Povm { pi1, pi2, pi0, regime, eta1 }
}

/// `<Psi_i|Pi_i|Psi_i>`.
pub fn success_probability<T: Real>(povm: &Povm<T>, pair: &QubitPair<T>, i: Hypothesis) -> T {
    povm.probability(Outcome::Conclude(i), pair, i)
}

/// `<Psi_i|Pi0|Psi_i>`.
pub fn inconclusive_probability<T: Real>(povm: &Povm<T>, pair: &QubitPair<T>, i: Hypothesis) -> T {
    povm.probability(Outcome::Inconclusive, pair, i)
}

/// `<Psi_i|Pi_j|Psi_i>` for `j != i`; zero for an unambiguous measurement.
pub fn wrong_probability<T: Real>(povm: &Povm<T>, pair: &QubitPair<T>, i: Hypothesis) -> T {
    povm.probability(Outcome::Conclude(i.other()), pair, i)
}

/// `Pi0` restricted to `span{Phi1, Phi2}` and `span{Phi'1, Phi'2}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Pi0Block<T: Real = f64> {
    pub block1: ComplexMatrix<T>,
    pub block2: ComplexMatrix<T>,
}

impl<T: Real> Pi0Block<T> {
    /// `block1 ⊕ block2 ⊕ I_4` in the transported basis
    /// `{Phi1, Phi2, Phi'1, Phi'2, Phi3, Phi'3, H3, H4}`.
    pub fn direct_sum(&self) -> ComplexMatrix<T> {
        self.block1.direct_sum(&self.block2).direct_sum(&ComplexMatrix::identity(4))
    }
}

/// The closed-form 2x2 inconclusive block, used for both subspaces:
///
/// ```text
/// [ -2/3 (1 - r - 1/r)      -sqrt(3)/6 (2 - r) ]
/// [ -sqrt(3)/6 (2 - r)       2/3 r             ]     r = sqrt(eta1/eta2)
/// ```
///
/// At `eta1 = 1/2` this is `[[2/3, -sqrt(3)/6], [-sqrt(3)/6, 2/3]]`. It does
/// not coincide with the residual `I - Pi1 - Pi2`; see
/// [`residual_pi0_blocks`] and [`block_formula_discrepancy`].
pub fn pi0_blocks<T: Real>(eta1: f64) -> Result<Pi0Block<T>> {
    if !(POVM_REGIME_LOW..=POVM_REGIME_HIGH).contains(&eta1) {
        return Err(Error::EtaOutOfPovmRegime(eta1));
    }
    let eta2 = 1.0 - eta1;
    let r = (eta1 / eta2).sqrt();
    let rinv = (eta2 / eta1).sqrt();
    let off = -(3f64.sqrt() / 6.0) * (2.0 - r);
    let block = ComplexMatrix::from_real(2, 2, &[-(2.0 / 3.0) * (1.0 - r - rinv), off, off, (2.0 / 3.0) * r])?;
    Ok(Pi0Block { block1: block.clone(), block2: block })
}

/// `W Pi0 W^dagger` with `W` the transported basis; the residual `Pi0`
/// expressed over `{Phi1, Phi2, Phi'1, Phi'2, Phi3, Phi'3, H3, H4}`.
pub fn residual_in_transported_basis<T: Real>(povm: &Povm<T>) -> ComplexMatrix<T> {
    let w = transported_basis::<T>();
    &(&w * &povm.pi0) * &w.adjoint()
}

/// The two 2x2 blocks of the residual `Pi0`.
pub fn residual_pi0_blocks<T: Real>(povm: &Povm<T>) -> Pi0Block<T> {
    let r = residual_in_transported_basis(povm);
    Pi0Block { block1: r.block(0, 0, 2, 2), block2: r.block(2, 2, 2, 2) }
}

/// Largest entrywise gap between the closed-form blocks of [`pi0_blocks`]
/// and the residual blocks of the Bayesian POVM at `eta1`.
pub fn block_formula_discrepancy(eta1: f64) -> Result<f64> {
    let formula = pi0_blocks::<f64>(eta1)?;
    let povm = optimal_povm::<f64>(Prior::Bayesian(eta1))?;
    let residual = residual_pi0_blocks(&povm);
    Ok(formula.block1.max_abs_diff(&residual.block1).max(formula.block2.max_abs_diff(&residual.block2)))
}

/// Largest `||Pi1|Psi_2>||` or `||Pi2|Psi_1>||` for `pair`.
pub fn unambiguity_residual<T: Real>(povm: &Povm<T>, pair: &QubitPair<T>) -> T {
    let norm = |m: &ComplexMatrix<T>, i: Hypothesis| {
        m.apply(triple_input(pair, i).amplitudes()).iter().fold(T::zero(), |s, a| s + a.norm_sqr()).sqrt()
    };
    norm(&povm.pi1, Hypothesis::Psi2).max(norm(&povm.pi2, Hypothesis::Psi1))
}

/// Positivity of the Bayesian operators at `eta1` (both coefficients
/// `>= -STRUCTURAL_TOL`).
pub fn bayesian_is_positive(eta1: f64) -> bool {
    let (c1, c2) = bayesian_coefficients(eta1);
    c1 >= -STRUCTURAL_TOL && c2 >= -STRUCTURAL_TOL
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Ket;
    use crate::states::{haar_qubit, LabeledBasis};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn pair(a: [C<f64>; 2], b: [C<f64>; 2]) -> QubitPair<f64> {
        QubitPair::from_amplitudes(a, b).unwrap()
    }

    fn hv() -> QubitPair<f64> {
        pair([C::new(1.0, 0.0), C::new(0.0, 0.0)], [C::new(0.0, 0.0), C::new(1.0, 0.0)])
    }

    /// Brute-force `<Psi^as|a ⊗ b>` over the four product amplitudes.
    fn antisym_overlap(a: &[C<f64>], b: &[C<f64>]) -> C<f64> {
        let r = 0.5f64.sqrt();
        (a[0] * b[1] - a[1] * b[0]) * r
    }

    #[test]
    fn regime_serializes_as_its_name() {
        for r in [Regime::BayesianPovm, Regime::PvmFavor1, Regime::PvmFavor2, Regime::Minimax] {
            assert_eq!(serde_json::to_value(r).unwrap(), r.name());
        }
    }

    #[test]
    fn minimax_equals_bayesian_at_half() {
        let m: Povm = optimal_povm(Prior::Minimax).unwrap();
        let b: Povm = optimal_povm(Prior::Bayesian(0.5)).unwrap();
        assert_eq!(bayesian_coefficients(0.5), (2.0 / 3.0, 2.0 / 3.0));
        assert!(m.pi1.max_abs_diff(&b.pi1) < 1e-16 && m.pi2.max_abs_diff(&b.pi2) < 1e-16);
        assert_eq!(b.regime, Regime::BayesianPovm);
    }

    #[test]
    fn coefficient_vanishes_at_upper_boundary() {
        let (c1, c2) = bayesian_coefficients(0.8);
        assert!((c1 - (2.0 / 3.0) * 1.5).abs() < 1e-15);
        assert!(c2.abs() < 1e-15);
    }

    #[test]
    fn pvm_regime_above_four_fifths() {
        let p: Povm = optimal_povm(Prior::Bayesian(0.9)).unwrap();
        assert_eq!(p.regime, Regime::PvmFavor1);
        assert_eq!(p.pi2.max_abs(), 0.0);
        assert!(p.pi1.max_abs_diff(&antisymmetric_projector_23()) < 1e-16);
        let q: Povm = optimal_povm(Prior::Bayesian(0.1)).unwrap();
        assert_eq!(q.regime, Regime::PvmFavor2);
        assert_eq!(q.pi1.max_abs(), 0.0);
    }

    #[test]
    fn every_regime_is_a_valid_povm() {
        for prior in [Prior::Minimax, Prior::Bayesian(0.0), Prior::Bayesian(0.2), Prior::Bayesian(0.37), Prior::Bayesian(0.8), Prior::Bayesian(1.0)] {
            let p: Povm = optimal_povm(prior).unwrap();
            p.validate(1e-10).unwrap();
            assert!(p.completeness_residual() < 1e-15);
        }
        assert!(optimal_povm::<f64>(Prior::Bayesian(1.2)).is_err());
    }

    #[test]
    fn positivity_boundary() {
        assert!(bayesian_is_positive(0.2) && bayesian_is_positive(0.8));
        assert!(!bayesian_is_positive(0.2 - 1e-6) && !bayesian_is_positive(0.8 + 1e-6));
        let inside = povm_with_coefficients::<f64>(bayesian_coefficients(0.5).0, bayesian_coefficients(0.5).1, Regime::BayesianPovm, Some(0.5));
        inside.validate(1e-10).unwrap();
        let (c1, c2) = bayesian_coefficients(0.8 + 1e-6);
        let outside = povm_with_coefficients::<f64>(c1, c2, Regime::BayesianPovm, None);
        assert!(outside.validate(1e-10).is_err());
    }

    #[test]
    fn computational_pair_success() {
        let p: Povm = optimal_povm(Prior::Minimax).unwrap();
        let s = success_probability(&p, &hv(), Hypothesis::Psi1);
        // (2/3) |<Psi^as|V,H>|^2
        let oracle = (2.0 / 3.0) * antisym_overlap(&[C::new(0.0, 0.0), C::new(1.0, 0.0)], &[C::new(1.0, 0.0), C::new(0.0, 0.0)]).norm_sqr();
        assert!((s - oracle).abs() < 1e-15);
        assert!((s - 1.0 / 3.0).abs() < 1e-15);
        assert!((inconclusive_probability(&p, &hv(), Hypothesis::Psi1) - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn identical_qubits_never_succeed() {
        let p: Povm = optimal_povm(Prior::Minimax).unwrap();
        let q = Ket::from_real(&[0.6, 0.8], LabeledBasis::polarization("q")).unwrap();
        let same = QubitPair::unchecked(q.clone(), q).unwrap();
        assert!(success_probability(&p, &same, Hypothesis::Psi1).abs() < 1e-15);
        assert!((inconclusive_probability(&p, &same, Hypothesis::Psi1) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn random_pairs_match_closed_form_and_are_unambiguous() {
        let p: Povm = optimal_povm(Prior::Minimax).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let mut worst = 0.0f64;
        for _ in 0..1000 {
            let pr = QubitPair::new(haar_qubit(&mut rng), haar_qubit(&mut rng)).unwrap();
            let closed = (1.0 / 3.0) * pr.det().norm_sqr();
            let s1 = success_probability(&p, &pr, Hypothesis::Psi1);
            let s2 = success_probability(&p, &pr, Hypothesis::Psi2);
            assert!((s1 - closed).abs() < 1e-12);
            assert!((s1 - s2).abs() < 1e-12);
            for i in Hypothesis::BOTH {
                let total = success_probability(&p, &pr, i) + inconclusive_probability(&p, &pr, i);
                assert!((total - 1.0).abs() < 1e-12);
            }
            worst = worst.max(unambiguity_residual(&p, &pr));
        }
        assert!(worst < 1e-10);
    }

    #[test]
    fn bayesian_success_closed_form() {
        let eta = 0.3;
        let p: Povm = optimal_povm(Prior::Bayesian(eta)).unwrap();
        let (c1, c2) = bayesian_coefficients(eta);
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for _ in 0..100 {
            let pr = QubitPair::new(haar_qubit(&mut rng), haar_qubit(&mut rng)).unwrap();
            let half_det = 0.5 * pr.det().norm_sqr();
            assert!((success_probability(&p, &pr, Hypothesis::Psi1) - c1 * half_det).abs() < 1e-12);
            assert!((success_probability(&p, &pr, Hypothesis::Psi2) - c2 * half_det).abs() < 1e-12);
            assert!(unambiguity_residual(&p, &pr) < 1e-10);
        }
    }

    #[test]
    fn rail_and_tensor_expectations_agree() {
        let p: Povm = optimal_povm(Prior::Minimax).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let pr = QubitPair::new(haar_qubit(&mut rng), haar_qubit(&mut rng)).unwrap();
        for i in Hypothesis::BOTH {
            for o in [Outcome::Conclude(Hypothesis::Psi1), Outcome::Conclude(Hypothesis::Psi2), Outcome::Inconclusive] {
                assert!((p.probability(o, &pr, i) - p.probability_on_rails(o, &pr, i)).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn closed_form_blocks_at_half() {
        let b: Pi0Block = pi0_blocks(0.5).unwrap();
        let s = 3f64.sqrt() / 6.0;
        let expect = ComplexMatrix::from_real(2, 2, &[2.0 / 3.0, -s, -s, 2.0 / 3.0]).unwrap();
        assert_eq!(b.block1, expect);
        assert_eq!(b.block2, expect);
        let eig = crate::linalg::eig_hermitian(&b.block1, 1e-10).unwrap();
        assert!((eig.values[0] - (2.0 / 3.0 - s)).abs() < 1e-15);
        assert!((eig.values[1] - (2.0 / 3.0 + s)).abs() < 1e-15);
        assert!(matches!(pi0_blocks::<f64>(0.9), Err(Error::EtaOutOfPovmRegime(_))));
    }

    #[test]
    fn residual_blocks_by_hand() {
        // Pi1 + Pi2 on span{Phi1, Phi2} is (2/3)(|Phi1><Phi1| + |chi><chi|)
        // with chi = Phi1/2 + sqrt(3)/2 Phi2.
        let p: Povm = optimal_povm(Prior::Minimax).unwrap();
        let r = residual_pi0_blocks(&p);
        let a = [C::new(1.0, 0.0), C::new(0.0, 0.0)];
        let chi = [C::new(0.5, 0.0), C::new(3f64.sqrt() / 2.0, 0.0)];
        let conclusive = (&ComplexMatrix::outer(&a, &a) + &ComplexMatrix::outer(&chi, &chi)).scale_real(2.0 / 3.0);
        let expect = &ComplexMatrix::identity(2) - &conclusive;
        assert!(r.block1.max_abs_diff(&expect) < 1e-15);
        let full = residual_in_transported_basis(&p);
        // outside the two blocks the residual is the identity
        assert!(full.block(4, 4, 4, 4).max_abs_diff(&ComplexMatrix::identity(4)) < 1e-15);
        assert!(full.block(0, 4, 4, 4).max_abs() < 1e-15);
        assert!(block_formula_discrepancy(0.5).unwrap() > 0.4);
    }
}
