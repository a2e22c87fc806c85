//! Monte Carlo driver: sample unknown pairs, prepare the rail photon through
//! the full pipeline, propagate it through a discriminator network and
//! aggregate click statistics.
//!
//! Trial `k` draws from a ChaCha20 stream selected by `k` under the master
//! seed, so results do not depend on how trials are scheduled across
//! threads. Per-trial results are collected in index order and reduced
//! sequentially.

mod config;
mod report;
mod stats;

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;

pub use config::{ExperimentConfig, Mode, PairSource, Pathway};
pub use report::{sweep_csv, Report, TrialCounts};
pub use stats::{CompensatedSum, MeanAccumulator};

use crate::circuit::{prepare_single_photon, Sampled, Stage, TrialRecord};
use crate::error::{Error, Result};
use crate::interferometer::{
    announced, build_discriminator, DetectorDistribution, Discriminator, DiscriminatorNetwork, NeumarkMeasurement, DETECTORS,
};
use crate::linalg::{Ket, STRUCTURAL_TOL};
use crate::povm::{optimal_povm, regime_for, success_probability, Povm, Prior};
use crate::states::{haar_qubit, Hypothesis, QubitPair, INDEPENDENCE_FLOOR};

/// Where a sampled photon ended up.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Click {
    Detector(usize),
    Inconclusive,
}

/// Everything observed in one trial.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutcome {
    pub index: u64,
    pub hypothesis: Hypothesis,
    pub pair: QubitPair<f64>,
    pub record: TrialRecord,
    pub distribution: DetectorDistribution<f64>,
    /// `<Psi_i|Pi_i|Psi_i>` from the operator, independent of the network.
    pub analytic_success: f64,
    /// Only in [`Mode::SampledBranches`].
    pub click: Option<Click>,
    /// Pairs discarded for falling under the independence floor.
    pub resamples: u32,
}

impl TrialOutcome {
    pub fn success_probability(&self) -> f64 {
        self.distribution.conclusive(self.hypothesis)
    }

    pub fn wrong_probability(&self) -> f64 {
        self.distribution.conclusive(self.hypothesis.other())
    }
}

enum Backend {
    TwoBranch(Box<DiscriminatorNetwork<f64>>),
    Generic(NeumarkMeasurement<f64>),
}

impl Backend {
    fn name(&self) -> &'static str {
        match self {
            Backend::TwoBranch(_) => "two-branch",
            Backend::Generic(_) => "generic",
        }
    }

    fn distribution(&self, ket: &Ket<f64>) -> Result<DetectorDistribution<f64>> {
        match self {
            Backend::TwoBranch(n) => n.distribution(ket),
            Backend::Generic(n) => n.distribution(ket),
        }
    }
}

/// A validated configuration with its measurement and network built.
pub struct Experiment {
    config: ExperimentConfig,
    povm: Povm<f64>,
    backend: Backend,
    fixed: Option<QubitPair<f64>>,
}

impl Experiment {
    pub fn new(config: ExperimentConfig) -> Result<Self> {
        config.validate()?;
        let povm = optimal_povm::<f64>(config.prior)?;
        let backend = if config.uses_two_branch_network() {
            Backend::TwoBranch(Box::new(build_discriminator(0.5)?))
        } else {
            Backend::Generic(NeumarkMeasurement::new(&povm, STRUCTURAL_TOL)?)
        };
        let fixed = config.pairs.fixed_pair()?;
        Ok(Self { config, povm, backend, fixed })
    }

    pub fn config(&self) -> &ExperimentConfig {
        &self.config
    }

    pub fn povm(&self) -> &Povm<f64> {
        &self.povm
    }

    pub fn pathway_name(&self) -> &'static str {
        self.backend.name()
    }

    /// Random stream of trial `index`.
    pub fn trial_rng(&self, index: u64) -> ChaCha20Rng {
        let mut rng = ChaCha20Rng::seed_from_u64(self.config.seed);
        rng.set_stream(index);
        rng
    }

    pub fn run_trial(&self, index: u64) -> Result<TrialOutcome> {
        let mut rng = self.trial_rng(index);
        self.run_trial_with(index, &mut rng)
    }

    pub fn run_trial_with<R: Rng>(&self, index: u64, rng: &mut R) -> Result<TrialOutcome> {
        let (pair, resamples) = match &self.fixed {
            Some(p) => (p.clone(), 0),
            None => sample_pair(rng),
        };
        let hypothesis = if rng.random::<f64>() < self.config.data_prior() { Hypothesis::Psi1 } else { Hypothesis::Psi2 };
        let (ket, record) = prepare_single_photon(&pair, hypothesis, &self.config.kerr, &mut Sampled::new(&mut *rng))?;
        let distribution = self.backend.distribution(&ket)?;
        let click = match self.config.mode {
            Mode::ExactAmplitude => None,
            Mode::SampledBranches => Some(sample_click(&distribution, rng)),
        };
        let analytic_success = success_probability(&self.povm, &pair, hypothesis);
        Ok(TrialOutcome { index, hypothesis, pair, record, distribution, analytic_success, click, resamples })
    }

    /// Runs every trial and aggregates the report.
    pub fn run(&self) -> Result<Report> {
        let start = Instant::now();
        let outcomes: Vec<Result<Observation>> =
            (0..self.config.trials as u64).into_par_iter().map(|k| self.run_trial(k).map(|t| observe(&t))).collect();
        let mut agg = Aggregate::default();
        for o in outcomes {
            agg.push(&o?);
        }
        let regime = regime_for(self.config.prior)?;
        Ok(agg.into_report(self, regime, start.elapsed().as_secs_f64()))
    }
}

/// Draws two Haar qubits, redrawing while they are nearly dependent.
fn sample_pair<R: Rng>(rng: &mut R) -> (QubitPair<f64>, u32) {
    let mut resamples = 0;
    loop {
        match QubitPair::new(haar_qubit(rng), haar_qubit(rng)) {
            Ok(p) if p.det().norm() > INDEPENDENCE_FLOOR => return (p, resamples),
            _ => resamples += 1,
        }
    }
}

fn sample_click<R: Rng>(d: &DetectorDistribution<f64>, rng: &mut R) -> Click {
    let mut u = rng.random::<f64>() * d.total();
    for (k, &p) in d.detectors.iter().enumerate() {
        if u < p {
            return Click::Detector(k);
        }
        u -= p;
    }
    Click::Inconclusive
}

/// Per-trial quantities entering the report. In sampled mode the rates are
/// click indicators, in exact mode probabilities.
#[derive(Debug, Clone, Copy)]
struct Observation {
    hypothesis: Hypothesis,
    detectors: [f64; 4],
    success: f64,
    wrong: f64,
    inconclusive: f64,
    analytic: f64,
    fidelity: f64,
    resamples: u32,
    misclassified: u32,
}

fn observe(t: &TrialOutcome) -> Observation {
    let d = &t.distribution;
    let (detectors, success, wrong, inconclusive) = match t.click {
        None => (d.detectors, t.success_probability(), t.wrong_probability(), d.inconclusive()),
        Some(click) => {
            let mut detectors = [0.0; 4];
            let (mut success, mut wrong, mut inconclusive) = (0.0, 0.0, 0.0);
            match click {
                Click::Detector(k) => {
                    detectors[k] = 1.0;
                    if announced(k) == t.hypothesis {
                        success = 1.0;
                    } else {
                        wrong = 1.0;
                    }
                }
                Click::Inconclusive => inconclusive = 1.0,
            }
            (detectors, success, wrong, inconclusive)
        }
    };
    let misclassified = t.record.branches.iter().filter(|e| e.stage == Stage::Qnd && e.misclassified).count() as u32;
    Observation {
        hypothesis: t.hypothesis,
        detectors,
        success,
        wrong,
        inconclusive,
        analytic: t.analytic_success,
        fidelity: t.record.fidelity,
        resamples: t.resamples,
        misclassified,
    }
}

#[derive(Default)]
struct Aggregate {
    success: MeanAccumulator,
    wrong: MeanAccumulator,
    inconclusive: MeanAccumulator,
    analytic: MeanAccumulator,
    fidelity: MeanAccumulator,
    conditional: [MeanAccumulator; 4],
    joint: [MeanAccumulator; 4],
    counts: TrialCounts,
}

impl Aggregate {
    fn push(&mut self, o: &Observation) {
        self.success.push(o.success);
        self.wrong.push(o.wrong);
        self.inconclusive.push(o.inconclusive);
        self.analytic.push(o.analytic);
        self.fidelity.push(o.fidelity);
        for k in 0..4 {
            self.joint[k].push(o.detectors[k]);
            if announced(k) == o.hypothesis {
                self.conditional[k].push(o.detectors[k]);
            }
        }
        self.counts.trials += 1;
        match o.hypothesis {
            Hypothesis::Psi1 => self.counts.psi1 += 1,
            Hypothesis::Psi2 => self.counts.psi2 += 1,
        }
        self.counts.resampled_pairs += u64::from(o.resamples);
        self.counts.misclassified_qnd += u64::from(o.misclassified);
    }

    fn into_report(self, exp: &Experiment, regime: crate::povm::Regime, wall_time_s: f64) -> Report {
        let named = |acc: &[MeanAccumulator; 4], f: fn(&MeanAccumulator) -> f64| {
            DETECTORS.iter().zip(acc).map(|(n, a)| (n.to_string(), f(a))).collect()
        };
        let mut stderr: std::collections::BTreeMap<String, f64> = named(&self.conditional, MeanAccumulator::stderr);
        stderr.insert("success_rate".into(), self.success.stderr());
        stderr.insert("wrong_rate".into(), self.wrong.stderr());
        stderr.insert("inconclusive_rate".into(), self.inconclusive.stderr());
        stderr.insert("mean_analytic_success".into(), self.analytic.stderr());
        Report {
            success_rate: self.success.mean(),
            inconclusive_rate: self.inconclusive.mean(),
            wrong_rate: self.wrong.mean(),
            detectors: named(&self.conditional, MeanAccumulator::mean),
            detectors_joint: named(&self.joint, MeanAccumulator::mean),
            mean_analytic_success: self.analytic.mean(),
            mean_fidelity: self.fidelity.mean(),
            stderr,
            regime,
            pathway: exp.pathway_name().to_string(),
            counts: self.counts,
            config: exp.config.clone(),
            wall_time_s,
        }
    }
}

/// Runs `config` end to end.
pub fn montecarlo(config: &ExperimentConfig) -> Result<Report> {
    Experiment::new(config.clone())?.run()
}

/// One report per `eta1`, each measuring with the optimal POVM for that
/// prior through the generic dilation and drawing data with that prior.
pub fn sweep_eta(grid: &[f64], config: &ExperimentConfig) -> Result<Vec<Report>> {
    grid.iter()
        .map(|&eta| {
            if !(0.0..=1.0).contains(&eta) {
                return Err(Error::InvalidProbability(eta));
            }
            let c = ExperimentConfig { prior: Prior::Bayesian(eta), data_prior: Some(eta), pathway: Pathway::Generic, ..config.clone() };
            montecarlo(&c)
        })
        .collect()
}
