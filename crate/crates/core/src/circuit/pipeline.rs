use serde::{Deserialize, Serialize};

use super::register::reorder;
use super::{
    apply_restoration, bell_measure, cnot, cnot_where, merge_photon, parity_qnd, split_photon, BranchEvent, Forced,
    KerrProbeModel, OutcomeSource, Parity, PipelineState, QndPort,
};
use crate::error::Result;
use crate::linalg::{Ket, Tensor};
use crate::states::{bell_state, encode_multirail, rail_track_name, BellKind, Hypothesis, LabeledBasis, QubitPair};

/// Events of one pipeline run and the fidelity of its output against the
/// rail encoding.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub branches: Vec<BranchEvent>,
    pub fidelity: f64,
}

impl TrialRecord {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("record serializes")
    }
}

fn plus(name: &str) -> Result<Ket<f64>> {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    Ket::from_real(&[r, r], LabeledBasis::polarization(name))
}

fn vacuum_route(name: &str, zero: &str, one: &str) -> Result<Ket<f64>> {
    Ket::basis_state(0, LabeledBasis::qubit(name, zero, one))
}

fn photon(ket: &Ket<f64>, name: &str) -> Result<Ket<f64>> {
    ket.clone().relabel(LabeledBasis::polarization(name))
}

/// Teleports `|psi1>_1 |psi2>_2 |psi_i>_3` onto one photon on eight rails.
///
/// Photon 2 lands on the `A` switch action, photon 1 on the `D` switch
/// action and photon 3 on the polarization of track `B`.
pub fn prepare_single_photon(
    pair: &QubitPair<f64>,
    i: Hypothesis,
    model: &KerrProbeModel,
    source: &mut dyn OutcomeSource,
) -> Result<(Ket<f64>, TrialRecord)> {
    let input = photon(pair.psi1(), "1")?.tensor(&photon(pair.psi2(), "2")?).tensor(&photon(pair.data(i), "3")?);
    let bc = bell_state(BellKind::PhiPlus, &LabeledBasis::polarization("B"), &LabeledBasis::polarization("C"))?;

    // A controls B, parity check routes B by the A switch action.
    let s = PipelineState::new(input).with(&plus("A")?)?.with(&bc)?;
    let s = cnot(s, "A", "B")?.with(&vacuum_route("a", "0_A", "1_A")?)?;
    let port = QndPort { signal: "B", reference: "C", route: "a", condition: None, tracks: ["B_1".into(), "B_2".into()] };
    let (_, s) = parity_qnd(s, &port, model, source)?;
    let (kind, s) = bell_measure(s, ("2", "A"), source)?;
    let s = apply_restoration(s, &[("a", kind.label())])?;

    // D controls B on both tracks, a parity check on each track routes by
    // the D switch action.
    let s = split_photon(s.with(&plus("D")?)?, "D")?;
    let s = cnot_where(s, "D", "B", ("a", 0))?;
    let s = cnot_where(s, "D", "B", ("a", 1))?;
    let mut s = merge_photon(s, "D")?.with(&vacuum_route("d", "0_D", "1_D")?)?;
    for track in 0..2 {
        let port = QndPort {
            signal: "B",
            reference: "C",
            route: "d",
            condition: Some(("a", track)),
            tracks: [rail_track_name(0, track), rail_track_name(1, track)],
        };
        s = parity_qnd(s, &port, model, source)?.1;
    }
    let (kind, s) = bell_measure(s, ("1", "D"), source)?;
    let s = apply_restoration(s, &[("d", kind.label())])?;
    let (kind, s) = bell_measure(s, ("3", "C"), source)?;
    let s = apply_restoration(s, &[("B", kind.label())])?;

    let out = reorder(&s.ket, &["d", "a", "B"])?.relabel(LabeledBasis::rail())?.normalize()?;
    let fidelity = out.fidelity(&encode_multirail(pair, i));
    Ok((out.gauge_fixed(), TrialRecord { branches: s.history, fidelity }))
}

/// One fully specified measurement branch.
#[derive(Debug, Clone, PartialEq)]
pub struct Branch {
    pub parities: [Parity; 3],
    pub bells: [BellKind; 3],
    pub probability: f64,
    pub output: Ket<f64>,
    pub record: TrialRecord,
}

/// Runs every combination of three parity labels and three Bell outcomes.
pub fn enumerate_branches(pair: &QubitPair<f64>, i: Hypothesis, model: &KerrProbeModel) -> Result<Vec<Branch>> {
    let mut out = Vec::with_capacity(512);
    for p in 0..8usize {
        let parities = [0, 1, 2].map(|k| Parity::BOTH[(p >> (2 - k)) & 1]);
        for b in 0..64usize {
            let bells = [0, 1, 2].map(|k| BellKind::ALL[(b >> (4 - 2 * k)) & 3]);
            let mut source = Forced::new(parities.to_vec(), bells.to_vec());
            let (output, record) = prepare_single_photon(pair, i, model, &mut source)?;
            let probability = record.branches.iter().map(|e| e.p).product();
            out.push(Branch { parities, bells, probability, output, record });
        }
    }
    Ok(out)
}
