//! State-preparation pipeline: CNOT gates, cross-Kerr parity QND with
//! feedforward routing, beam-splitter path splitting, Bell analysis and
//! Pauli restoration. It turns the symmetric three-photon input into the
//! eight-rail single-photon state.
//!
//! The QND records a parity label but routes coherently: the signal
//! photon's even component stays on track 1 with the route slot at `0`,
//! the odd component is bit-flipped and sent to track 2 with the route slot
//! at `1`. Projecting on the label instead would collapse the controlling
//! photon and the teleported state would lose its first-photon amplitude.

mod kerr;
mod pipeline;
pub mod register;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

pub use kerr::{kerr_error_rate, KerrMode, KerrProbeModel};
pub use pipeline::{enumerate_branches, prepare_single_photon, Branch, TrialRecord};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, Ket, C};
use crate::states::{BellKind, LabeledBasis};
use register::{append, apply_controlled, apply_on_slots, contract, level_weight};

/// Tolerance below which a forced branch is treated as impossible.
const IMPOSSIBLE_BRANCH: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub const BOTH: [Parity; 2] = [Parity::Even, Parity::Odd];

    pub fn label(self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    Qnd,
    Bell,
    Feedforward,
}

/// One recorded event of a pipeline run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BranchEvent {
    pub stage: Stage,
    pub pair: String,
    pub outcome: String,
    pub p: f64,
    pub correction: String,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub misclassified: bool,
}

/// Ket plus the events that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineState {
    pub ket: Ket<f64>,
    pub history: Vec<BranchEvent>,
}

impl PipelineState {
    pub fn new(ket: Ket<f64>) -> Self {
        Self { ket, history: Vec::new() }
    }

    /// Tensors a fresh subsystem onto the right.
    pub fn with(self, other: &Ket<f64>) -> Result<Self> {
        Ok(Self { ket: append(&self.ket, other)?, ..self })
    }

    /// Product of the Born weights of every recorded event.
    pub fn branch_probability(&self) -> f64 {
        self.history.iter().map(|e| e.p).product()
    }
}

/// Supplies measurement outcomes, either sampled or forced.
pub trait OutcomeSource {
    fn parity(&mut self, p_odd: f64) -> Result<Parity>;
    fn bell(&mut self, weights: &[f64; 4]) -> Result<BellKind>;
    /// Homodyne noise in units of the vacuum standard deviation.
    fn quadrature_noise(&mut self) -> f64;
}

/// Born sampling from a random stream.
pub struct Sampled<'a, R: Rng + ?Sized> {
    pub rng: &'a mut R,
}

impl<'a, R: Rng + ?Sized> Sampled<'a, R> {
    pub fn new(rng: &'a mut R) -> Self {
        Self { rng }
    }

    fn pick(&mut self, weights: &[f64]) -> usize {
        let total: f64 = weights.iter().sum();
        let mut u = self.rng.random::<f64>() * total;
        for (k, &w) in weights.iter().enumerate() {
            if u < w {
                return k;
            }
            u -= w;
        }
        weights.iter().rposition(|&w| w > 0.0).unwrap_or(0)
    }
}

impl<R: Rng + ?Sized> OutcomeSource for Sampled<'_, R> {
    fn parity(&mut self, p_odd: f64) -> Result<Parity> {
        Ok(Parity::BOTH[self.pick(&[1.0 - p_odd, p_odd])])
    }

    fn bell(&mut self, weights: &[f64; 4]) -> Result<BellKind> {
        Ok(BellKind::ALL[self.pick(weights)])
    }

    fn quadrature_noise(&mut self) -> f64 {
        StandardNormal.sample(&mut *self.rng)
    }
}

/// Replays a fixed outcome sequence; used for exhaustive enumeration.
/// Quadrature noise is zero.
#[derive(Debug, Clone, Default)]
pub struct Forced {
    parities: Vec<Parity>,
    bells: Vec<BellKind>,
    next_parity: usize,
    next_bell: usize,
}

impl Forced {
    pub fn new(parities: Vec<Parity>, bells: Vec<BellKind>) -> Self {
        Self { parities, bells, next_parity: 0, next_bell: 0 }
    }
}

impl OutcomeSource for Forced {
    fn parity(&mut self, p_odd: f64) -> Result<Parity> {
        let out = *self
            .parities
            .get(self.next_parity)
            .ok_or_else(|| Error::InvalidConfig("forced parity sequence exhausted".into()))?;
        self.next_parity += 1;
        let w = if out.is_odd() { p_odd } else { 1.0 - p_odd };
        if w < IMPOSSIBLE_BRANCH {
            return Err(Error::InvalidProbability(w));
        }
        Ok(out)
    }

    fn bell(&mut self, weights: &[f64; 4]) -> Result<BellKind> {
        let out = *self
            .bells
            .get(self.next_bell)
            .ok_or_else(|| Error::InvalidConfig("forced Bell sequence exhausted".into()))?;
        self.next_bell += 1;
        let w = weights[BellKind::ALL.iter().position(|&k| k == out).unwrap()];
        if w < IMPOSSIBLE_BRANCH {
            return Err(Error::InvalidProbability(w));
        }
        Ok(out)
    }

    fn quadrature_noise(&mut self) -> f64 {
        0.0
    }
}

fn require_qubit(ket: &Ket<f64>, slot: &str) -> Result<()> {
    let p = ket.basis().require_slot(slot)?;
    match ket.basis().slots()[p].dim() {
        2 => Ok(()),
        d => Err(Error::SlotMismatch(format!("slot `{slot}` has {d} levels, expected 2"))),
    }
}

fn real(entries: &[f64], n: usize) -> ComplexMatrix<f64> {
    ComplexMatrix::from_real(n, n, entries).expect("square literal")
}

pub fn sigma_x() -> ComplexMatrix<f64> {
    real(&[0.0, 1.0, 1.0, 0.0], 2)
}

/// Controlled-NOT on `(control, target)`, `|H><H| ⊗ I + |V><V| ⊗ sigma_x`.
pub fn cnot_matrix() -> ComplexMatrix<f64> {
    real(&[1., 0., 0., 0., 0., 1., 0., 0., 0., 0., 0., 1., 0., 0., 1., 0.], 4)
}

/// 50-50 splitter `[[1, 1], [1, -1]] / sqrt(2)`; its own inverse.
pub fn balanced_splitter() -> ComplexMatrix<f64> {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    real(&[r, r, r, -r], 2)
}

/// Permutation on `(signal, reference, route)` sending
/// `(b, c, r) -> (c ^ r, c, b ^ c ^ r)`. With the route slot at `0` it
/// leaves even parity alone and maps odd parity to a flipped signal on
/// route `1`.
pub fn parity_router() -> ComplexMatrix<f64> {
    let mut m = ComplexMatrix::zeros(8, 8);
    for idx in 0..8 {
        let (b, c, r) = (idx >> 2, (idx >> 1) & 1, idx & 1);
        let out = ((c ^ r) << 2) | (c << 1) | (b ^ c ^ r);
        m[(out, idx)] = C::new(1.0, 0.0);
    }
    m
}

pub fn cnot(state: PipelineState, control: &str, target: &str) -> Result<PipelineState> {
    require_qubit(&state.ket, control)?;
    require_qubit(&state.ket, target)?;
    Ok(PipelineState { ket: apply_on_slots(&state.ket, &[control, target], &cnot_matrix())?, ..state })
}

/// CNOT acting only on the component where `condition` holds.
pub fn cnot_where(state: PipelineState, control: &str, target: &str, condition: (&str, usize)) -> Result<PipelineState> {
    require_qubit(&state.ket, control)?;
    require_qubit(&state.ket, target)?;
    Ok(PipelineState { ket: apply_controlled(&state.ket, condition, &[control, target], &cnot_matrix())?, ..state })
}

/// Where a parity check acts and how its feedforward is labeled.
#[derive(Debug, Clone)]
pub struct QndPort<'a> {
    pub signal: &'a str,
    pub reference: &'a str,
    /// Two-level slot recording the switch action; must start at level 0.
    pub route: &'a str,
    /// Restricts the check to the component with this slot at this level.
    pub condition: Option<(&'a str, usize)>,
    /// Names of the two output tracks, route levels 0 and 1.
    pub tracks: [String; 2],
}

impl QndPort<'_> {
    fn pair_label(&self) -> String {
        let base = match self.condition {
            Some((_, level)) => format!("{}_{}", self.signal, level + 1),
            None => self.signal.to_string(),
        };
        format!("{base},{}", self.reference)
    }

    fn apply(&self, ket: &Ket<f64>, slots: &[&str], u: &ComplexMatrix<f64>) -> Result<Ket<f64>> {
        match self.condition {
            Some(c) => apply_controlled(ket, c, slots, u),
            None => apply_on_slots(ket, slots, u),
        }
    }
}

/// Probability of odd parity on `(signal, reference)` within the component
/// selected by `condition`. An empty component reads as even.
fn odd_fraction(ket: &Ket<f64>, port: &QndPort<'_>) -> Result<f64> {
    let basis = ket.basis();
    let (pb, pc) = (basis.require_slot(port.signal)?, basis.require_slot(port.reference)?);
    let cond = port.condition.map(|(n, l)| basis.require_slot(n).map(|p| (p, l))).transpose()?;
    let (mut odd, mut total) = (0.0, 0.0);
    for (idx, a) in ket.amplitudes().iter().enumerate() {
        let digits = basis.digits(idx);
        if cond.is_some_and(|(p, l)| digits[p] != l) {
            continue;
        }
        let w = a.norm_sqr();
        total += w;
        if digits[pb] != digits[pc] {
            odd += w;
        }
    }
    if total <= f64::MIN_POSITIVE {
        return Ok(0.0);
    }
    Ok(odd / total)
}

/// Cross-Kerr parity check with feedforward switch routing.
///
/// Returns the parity the probe readout reports. In `Physical` mode a
/// misread parity sends the component down the wrong track, i.e. the
/// routing is followed by `sigma_x` on signal and route slots.
pub fn parity_qnd(
    state: PipelineState,
    port: &QndPort<'_>,
    model: &KerrProbeModel,
    source: &mut dyn OutcomeSource,
) -> Result<(Parity, PipelineState)> {
    for s in [port.signal, port.reference, port.route] {
        require_qubit(&state.ket, s)?;
    }
    let p_odd = odd_fraction(&state.ket, port)?;
    let truth = source.parity(p_odd)?;
    let p = if truth.is_odd() { p_odd } else { 1.0 - p_odd };
    let reported = match model.mode {
        KerrMode::Ideal => truth,
        KerrMode::Physical => {
            let x = model.quadrature_mean(truth.is_odd()) + source.quadrature_noise();
            if model.classify(x) {
                Parity::Odd
            } else {
                Parity::Even
            }
        }
    };
    let misclassified = reported != truth;
    let slots = [port.signal, port.reference, port.route];
    let mut ket = port.apply(&state.ket, &slots, &parity_router())?;
    if misclassified {
        ket = port.apply(&ket, &[port.signal], &sigma_x())?;
        ket = port.apply(&ket, &[port.route], &sigma_x())?;
    }
    let pair = port.pair_label();
    let mut history = state.history;
    history.push(BranchEvent {
        stage: Stage::Qnd,
        pair: pair.clone(),
        outcome: reported.label().into(),
        p,
        correction: "none".into(),
        misclassified,
    });
    let (track, correction) = match reported {
        Parity::Even => (&port.tracks[0], "identity"),
        Parity::Odd => (&port.tracks[1], "sigma_x"),
    };
    history.push(BranchEvent {
        stage: Stage::Feedforward,
        pair,
        outcome: track.clone(),
        p: 1.0,
        correction: correction.into(),
        misclassified: false,
    });
    Ok((reported, PipelineState { ket, history }))
}

fn path_slot(source: &str) -> String {
    format!("{source}_path")
}

/// Splits the photon on `source` over two fresh paths `<source>1`,
/// `<source>2` with a 50-50 splitter.
pub fn split_photon(state: PipelineState, source: &str) -> Result<PipelineState> {
    state.ket.basis().require_slot(source)?;
    let slot = path_slot(source);
    let (p1, p2) = (format!("{source}1"), format!("{source}2"));
    let path = Ket::basis_state(0, LabeledBasis::qubit(&slot, &p1, &p2))?;
    let state = state.with(&path)?;
    Ok(PipelineState { ket: apply_on_slots(&state.ket, &[&slot], &balanced_splitter())?, ..state })
}

/// Recombines the two paths of `source` and drops the path slot. Fails if
/// any amplitude is left on the second output.
pub fn merge_photon(state: PipelineState, source: &str) -> Result<PipelineState> {
    let slot = path_slot(source);
    let ket = apply_on_slots(&state.ket, &[&slot], &balanced_splitter())?;
    let stray = level_weight(&ket, &slot, 1)?;
    if stray > 1e-12 {
        return Err(Error::Malformed(format!("{stray:e} of the weight left the merged path")));
    }
    let ket = contract(&ket, &[&slot], &[C::new(1.0, 0.0), C::new(0.0, 0.0)])?.normalize()?;
    Ok(PipelineState { ket, ..state })
}

/// Bell projection on `(first, second)`; the two slots are removed and the
/// remainder renormalized.
pub fn bell_measure(state: PipelineState, modes: (&str, &str), source: &mut dyn OutcomeSource) -> Result<(BellKind, PipelineState)> {
    require_qubit(&state.ket, modes.0)?;
    require_qubit(&state.ket, modes.1)?;
    let slots = [modes.0, modes.1];
    let mut rests = Vec::with_capacity(4);
    let mut weights = [0.0; 4];
    for (k, kind) in BellKind::ALL.iter().enumerate() {
        let rest = contract(&state.ket, &slots, &kind.amplitudes::<f64>())?;
        weights[k] = rest.norm_sqr();
        rests.push(rest);
    }
    let kind = source.bell(&weights)?;
    let k = BellKind::ALL.iter().position(|&b| b == kind).unwrap();
    let ket = rests.swap_remove(k).normalize()?;
    let mut history = state.history;
    history.push(BranchEvent {
        stage: Stage::Bell,
        pair: format!("{},{}", modes.0, modes.1),
        outcome: kind.label().into(),
        p: weights[k],
        correction: correction_name(kind).into(),
        misclassified: false,
    });
    Ok((kind, PipelineState { ket, history }))
}

/// Name of the Pauli that undoes the teleportation byproduct of `kind`.
pub fn correction_name(kind: BellKind) -> &'static str {
    match kind {
        BellKind::PhiPlus => "identity",
        BellKind::PsiPlus => "sigma_x",
        BellKind::PsiMinus => "i*sigma_y",
        BellKind::PhiMinus => "sigma_z",
    }
}

/// Restoring unitary for `kind`: `I`, `sigma_x`, `i sigma_y`, `sigma_z`.
pub fn correction(kind: BellKind) -> ComplexMatrix<f64> {
    match kind {
        BellKind::PhiPlus => real(&[1.0, 0.0, 0.0, 1.0], 2),
        BellKind::PsiPlus => sigma_x(),
        BellKind::PsiMinus => real(&[0.0, 1.0, -1.0, 0.0], 2),
        BellKind::PhiMinus => real(&[1.0, 0.0, 0.0, -1.0], 2),
    }
}

/// Applies the restoring Pauli for each `(slot, outcome label)`.
pub fn apply_restoration(state: PipelineState, outcomes: &[(&str, &str)]) -> Result<PipelineState> {
    let mut ket = state.ket;
    for &(slot, label) in outcomes {
        let kind: BellKind = label.parse()?;
        require_qubit(&ket, slot)?;
        ket = apply_on_slots(&ket, &[slot], &correction(kind))?;
    }
    Ok(PipelineState { ket, ..state })
}

#[cfg(test)]
mod tests {
    use super::register::reorder;
    use super::*;
    use crate::linalg::Tensor;
    use crate::states::bell_state;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn pol(name: &str, amps: &[f64]) -> Ket<f64> {
        Ket::from_real(amps, LabeledBasis::polarization(name)).unwrap()
    }

    fn plus(name: &str) -> Ket<f64> {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        pol(name, &[r, r])
    }

    fn assert_amps(ket: &Ket<f64>, want: &[f64]) {
        assert_eq!(ket.dim(), want.len());
        for (k, (a, b)) in ket.amplitudes().iter().zip(want).enumerate() {
            assert!((a.re - b).abs() < 1e-12 && a.im.abs() < 1e-12, "{k}: {a} vs {b}");
        }
    }

    fn first_stage() -> PipelineState {
        let phi = bell_state(BellKind::PhiPlus, &LabeledBasis::polarization("B"), &LabeledBasis::polarization("C")).unwrap();
        PipelineState::new(plus("A").tensor(&phi))
    }

    fn port() -> QndPort<'static> {
        QndPort { signal: "B", reference: "C", route: "a", condition: None, tracks: ["B_1".into(), "B_2".into()] }
    }

    fn route_slot() -> Ket<f64> {
        Ket::basis_state(0, LabeledBasis::qubit("a", "0_A", "1_A")).unwrap()
    }

    #[test]
    fn cnot_truth_table() {
        let s = PipelineState::new(pol("A", &[1.0, 0.0]).tensor(&pol("B", &[1.0, 0.0])));
        assert_amps(&cnot(s, "A", "B").unwrap().ket, &[1.0, 0.0, 0.0, 0.0]);
        let s = PipelineState::new(pol("A", &[0.0, 1.0]).tensor(&pol("B", &[1.0, 0.0])));
        assert_amps(&cnot(s, "A", "B").unwrap().ket, &[0.0, 0.0, 0.0, 1.0]);
        let bad = PipelineState::new(Ket::basis_state(0, LabeledBasis::anonymous(3)).unwrap().tensor(&pol("B", &[1.0, 0.0])));
        assert!(matches!(cnot(bad, "m", "B"), Err(Error::SlotMismatch(_))));
    }

    #[test]
    fn cnot_on_resource_gives_four_terms() {
        // HHH + HVV + VVH + VHV over (A, B, C), each 1/2
        let s = cnot(first_stage(), "A", "B").unwrap();
        assert_amps(&s.ket, &[0.5, 0.0, 0.0, 0.5, 0.0, 0.5, 0.5, 0.0]);
    }

    #[test]
    fn router_is_permutation_fixing_even_parity() {
        let r = parity_router();
        assert!(r.is_unitary(1e-15));
        for (b, c) in [(0, 0), (1, 1)] {
            let idx = (b << 2) | (c << 1);
            assert_eq!(r[(idx, idx)], C::new(1.0, 0.0));
        }
        // |H V 0> -> |V V 1>, |V H 0> -> |H H 1>
        assert_eq!(r[(0b111, 0b010)], C::new(1.0, 0.0));
        assert_eq!(r[(0b001, 0b100)], C::new(1.0, 0.0));
    }

    #[test]
    fn qnd_balanced_on_cnot_output_and_factorizes() {
        let mut src = Forced::new(vec![Parity::Odd], vec![]);
        let s = cnot(first_stage(), "A", "B").unwrap().with(&route_slot()).unwrap();
        let (parity, s) = parity_qnd(s, &port(), &KerrProbeModel::IDEAL, &mut src).unwrap();
        assert_eq!(parity, Parity::Odd);
        assert!((s.history[0].p - 0.5).abs() < 1e-15);
        let r = reorder(&s.ket, &["A", "a", "B", "C"]).unwrap();
        // (|H,0_A> + |V,1_A>) (|HH> + |VV>) / 2
        let pair = [1.0, 0.0, 0.0, 1.0];
        let want: Vec<f64> = pair.iter().flat_map(|x| pair.iter().map(move |y| 0.5 * x * y)).collect();
        assert_amps(&r, &want);
        assert!((s.ket.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn qnd_on_definite_parity_is_inert() {
        let s = PipelineState::new(pol("B", &[1.0, 0.0]).tensor(&pol("C", &[1.0, 0.0]))).with(&route_slot()).unwrap();
        let before = s.ket.clone();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..20 {
            let (parity, out) = parity_qnd(s.clone(), &port(), &KerrProbeModel::IDEAL, &mut Sampled::new(&mut rng)).unwrap();
            assert_eq!(parity, Parity::Even);
            assert_eq!(out.history[0].p, 1.0);
            assert_eq!(out.ket.amplitudes(), before.amplitudes());
        }
        let mut src = Forced::new(vec![Parity::Odd], vec![]);
        assert!(parity_qnd(s, &port(), &KerrProbeModel::IDEAL, &mut src).is_err());
    }

    #[test]
    fn split_and_merge() {
        let s = PipelineState::new(plus("D"));
        let split = split_photon(s.clone(), "D").unwrap();
        for a in split.ket.amplitudes() {
            assert!((a.norm() - 0.5).abs() < 1e-15);
        }
        assert!((split.ket.norm_sqr() - 1.0).abs() < 1e-12);
        let merged = merge_photon(split.clone(), "D").unwrap();
        assert_eq!(merged.ket.basis(), s.ket.basis());
        for (a, b) in merged.ket.amplitudes().iter().zip(s.ket.amplitudes()) {
            assert!((a - b).norm() < 1e-15);
        }
        let walked = PipelineState {
            ket: apply_on_slots(&split.ket, &["D_path"], &balanced_splitter()).unwrap(),
            ..split
        };
        let walked = PipelineState { ket: apply_on_slots(&walked.ket, &["D_path"], &sigma_x()).unwrap(), ..walked };
        assert!(merge_photon(walked, "D").is_err());
    }

    #[test]
    fn bell_eigenstate_is_certain() {
        let chi = pol("x", &[0.6, 0.8]);
        let phi = bell_state(BellKind::PhiPlus, &LabeledBasis::polarization("p"), &LabeledBasis::polarization("q")).unwrap();
        let s = PipelineState::new(phi.tensor(&chi));
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let (kind, out) = bell_measure(s, ("p", "q"), &mut Sampled::new(&mut rng)).unwrap();
        assert_eq!(kind, BellKind::PhiPlus);
        assert!((out.history[0].p - 1.0).abs() < 1e-15);
        assert_amps(&out.ket, &[0.6, 0.8]);
    }

    #[test]
    fn teleportation_byproducts_and_restoration() {
        let psi = Ket::new(vec![C::new(0.6, 0.0), C::new(0.0, 0.8)], LabeledBasis::polarization("x")).unwrap();
        let phi = bell_state(BellKind::PhiPlus, &LabeledBasis::polarization("y"), &LabeledBasis::qubit("t", "0", "1")).unwrap();
        let s = PipelineState::new(psi.tensor(&phi));
        let (a, b) = (psi.amplitudes()[0], psi.amplitudes()[1]);
        for kind in BellKind::ALL {
            let mut src = Forced::new(vec![], vec![kind]);
            let (_, out) = bell_measure(s.clone(), ("x", "y"), &mut src).unwrap();
            assert!((out.history[0].p - 0.25).abs() < 1e-15);
            let raw = out.ket.amplitudes();
            let expect = match kind {
                BellKind::PhiPlus => [a, b],
                BellKind::PsiPlus => [b, a],
                BellKind::PsiMinus => [-b, a],
                BellKind::PhiMinus => [a, -b],
            };
            assert!((raw[0] - expect[0]).norm() < 1e-14 && (raw[1] - expect[1]).norm() < 1e-14, "{kind}");
            let fixed = apply_restoration(out, &[("t", kind.label())]).unwrap();
            let restored = fixed.ket.relabel(psi.basis().clone()).unwrap();
            assert!((restored.fidelity(&psi) - 1.0).abs() < 1e-14);
            assert!((restored.amplitudes()[0] - a).norm() < 1e-14);
        }
        let s = PipelineState::new(pol("t", &[1.0, 0.0]));
        assert!(matches!(apply_restoration(s, &[("t", "chi+")]), Err(Error::UnknownOutcomeLabel(_))));
    }

    #[test]
    fn bell_weights_of_teleport_state() {
        let psi = pol("x", &[0.6, 0.8]);
        let phi = bell_state(BellKind::PhiPlus, &LabeledBasis::polarization("y"), &LabeledBasis::polarization("t")).unwrap();
        let s = PipelineState::new(psi.tensor(&phi));
        let mut total = 0.0;
        for kind in BellKind::ALL {
            let (_, out) = bell_measure(s.clone(), ("x", "y"), &mut Forced::new(vec![], vec![kind])).unwrap();
            total += out.history[0].p;
        }
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn physical_misread_flips_route() {
        let model = KerrProbeModel::physical(1.0, 0.0).unwrap();
        struct Noisy(f64);
        impl OutcomeSource for Noisy {
            fn parity(&mut self, _: f64) -> Result<Parity> {
                Ok(Parity::Even)
            }
            fn bell(&mut self, _: &[f64; 4]) -> Result<BellKind> {
                Ok(BellKind::PhiPlus)
            }
            fn quadrature_noise(&mut self) -> f64 {
                self.0
            }
        }
        let s = PipelineState::new(pol("B", &[1.0, 0.0]).tensor(&pol("C", &[1.0, 0.0]))).with(&route_slot()).unwrap();
        let (parity, out) = parity_qnd(s, &port(), &model, &mut Noisy(-1.0)).unwrap();
        assert_eq!(parity, Parity::Odd);
        assert!(out.history[0].misclassified);
        // |H H 0> misrouted to |V H 1>
        assert_eq!(out.ket.amplitudes()[0b101], C::new(1.0, 0.0));
    }
}
