use qdisc_core::circuit::KerrProbeModel;
use qdisc_core::harness::{montecarlo, sweep_eta, Experiment, ExperimentConfig, Mode, Report};
use qdisc_core::povm::Prior;

fn with_threads(n: usize, config: &ExperimentConfig) -> Report {
    rayon::ThreadPoolBuilder::new().num_threads(n).build().unwrap().install(|| montecarlo(config).unwrap())
}

#[test]
fn seed_determines_every_field_but_wall_time() {
    for mode in [Mode::ExactAmplitude, Mode::SampledBranches] {
        let config = ExperimentConfig { trials: 2_000, seed: 77, mode, ..Default::default() };
        let a = montecarlo(&config).unwrap().without_timing();
        let b = montecarlo(&config).unwrap().without_timing();
        assert_eq!(a, b);
        assert_eq!(a.to_json(), b.to_json());
        let other = montecarlo(&ExperimentConfig { seed: 78, ..config }).unwrap();
        assert_ne!(other.success_rate, a.success_rate);
    }
}

#[test]
fn worker_count_does_not_change_the_report() {
    let config = ExperimentConfig {
        trials: 3_000,
        seed: 5,
        mode: Mode::SampledBranches,
        kerr: KerrProbeModel::physical(2.0, 0.4).unwrap(),
        ..Default::default()
    };
    let one = with_threads(1, &config).without_timing();
    for n in [2, 3, 8] {
        assert_eq!(with_threads(n, &config).without_timing(), one, "{n} workers");
    }
}

#[test]
fn trials_are_independent_of_execution_order() {
    let exp = Experiment::new(ExperimentConfig { trials: 200, seed: 12, mode: Mode::SampledBranches, ..Default::default() }).unwrap();
    let forward: Vec<_> = (0..200).map(|k| exp.run_trial(k).unwrap()).collect();
    let mut backward: Vec<_> = (0..200).rev().map(|k| exp.run_trial(k).unwrap()).collect();
    backward.reverse();
    assert_eq!(forward, backward);
    let clicks = forward.iter().filter(|t| t.click.is_some()).count();
    assert_eq!(clicks, 200);
}

#[test]
fn sampled_rates_converge_to_exact_means() {
    let exact = montecarlo(&ExperimentConfig { trials: 100_000, seed: 31, mode: Mode::ExactAmplitude, ..Default::default() }).unwrap();
    let sampled = montecarlo(&ExperimentConfig { trials: 100_000, seed: 31, mode: Mode::SampledBranches, ..Default::default() }).unwrap();
    for key in ["success_rate", "inconclusive_rate"] {
        let (e, s) = match key {
            "success_rate" => (exact.success_rate, sampled.success_rate),
            _ => (exact.inconclusive_rate, sampled.inconclusive_rate),
        };
        assert!((e - s).abs() < 4.0 * sampled.stderr[key], "{key}: exact {e} sampled {s}");
    }
    for k in ["C1", "C2", "C3", "C4"] {
        let (e, s) = (exact.detectors[k], sampled.detectors[k]);
        assert!((e - s).abs() < 4.0 * sampled.stderr[k], "{k}: exact {e} sampled {s}");
    }
    assert_eq!(sampled.wrong_rate, 0.0);
}

#[test]
fn ideal_pipeline_has_unit_fidelity_on_average() {
    let r = montecarlo(&ExperimentConfig { trials: 500, seed: 2, ..Default::default() }).unwrap();
    assert!((r.mean_fidelity - 1.0).abs() < 1e-12);
    assert_eq!(r.counts.misclassified_qnd, 0);
    assert_eq!(r.counts.psi1 + r.counts.psi2, 500);
}

#[test]
fn weak_probe_degrades_fidelity_and_admits_errors() {
    let config = ExperimentConfig {
        trials: 4_000,
        seed: 3,
        kerr: KerrProbeModel::physical(1.0, 0.5).unwrap(),
        ..Default::default()
    };
    let r = montecarlo(&config).unwrap();
    assert!(r.counts.misclassified_qnd > 0);
    assert!(r.mean_fidelity < 0.99);
    assert!(r.wrong_rate > 1e-4);
}

#[test]
fn success_curve_is_continuous_at_the_upper_boundary() {
    let base = ExperimentConfig { trials: 40_000, seed: 4, ..Default::default() };
    let r = sweep_eta(&[0.8 - 1e-3, 0.8 + 1e-3], &base).unwrap();
    let gap = (r[0].success_rate - r[1].success_rate).abs();
    let tol = 4.0 * (r[0].stderr["success_rate"].hypot(r[1].stderr["success_rate"])) + 5e-3;
    assert!(gap < tol, "gap {gap} tol {tol}");
    assert_eq!(r[1].config.prior, Prior::Bayesian(0.8 + 1e-3));
}
