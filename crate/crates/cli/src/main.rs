use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use qdisc_core::circuit::{kerr_error_rate, KerrProbeModel};
use qdisc_core::harness::{montecarlo, sweep_csv, sweep_eta, Experiment, ExperimentConfig, Mode, Pathway, Report};
use qdisc_core::interferometer::{reck_decompose, reck_reconstruct};
use qdisc_core::linalg::{MatrixJson, STRUCTURAL_TOL};
use qdisc_core::povm::{optimal_povm, Prior};
use qdisc_core::{BeamSplitterNetwork, Matrix};
use serde_json::json;

/// Unambiguous discriminator simulator.
#[derive(Parser)]
#[command(name = "qdisc", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Monte Carlo run over random unknown pairs.
    Montecarlo {
        #[command(flatten)]
        prior: PriorArgs,
        #[command(flatten)]
        run: RunArgs,
        /// Always use the 16-port dilation instead of the two-branch network.
        #[arg(long)]
        generic: bool,
        /// Report file; `.csv` writes flat CSV, anything else JSON. Defaults to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// One Monte Carlo run per prior, measuring and drawing with that prior.
    Sweep {
        /// Comma-separated priors, e.g. `0.2,0.3,0.5`.
        #[arg(long, value_delimiter = ',', required = true)]
        etas: Vec<f64>,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Measurement operators.
    Povm {
        #[command(subcommand)]
        action: PovmAction,
    },
    /// Compile a unitary into a beam-splitter netlist.
    Decompose {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = STRUCTURAL_TOL)]
        tol: f64,
    },
    /// Check that a netlist reconstructs a unitary.
    Verify {
        #[arg(long)]
        net: PathBuf,
        #[arg(long)]
        against: PathBuf,
        #[arg(long, default_value_t = STRUCTURAL_TOL)]
        tol: f64,
    },
    /// Homodyne parity misread probability of a cross-Kerr probe.
    QndError {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        theta: f64,
    },
    /// Branch record of a single trial.
    Trial {
        #[command(flatten)]
        prior: PriorArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        index: u64,
        #[arg(long, default_value = "ideal", value_parser = parse_kerr)]
        kerr: KerrProbeModel,
    },
}

#[derive(Subcommand)]
enum PovmAction {
    /// Write `pi1`, `pi2` and `pi0` as JSON matrices.
    Dump {
        #[command(flatten)]
        prior: PriorArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
#[group(multiple = false)]
struct PriorArgs {
    /// Prior probability of the first hypothesis.
    #[arg(long)]
    eta: Option<f64>,
    /// Optimize without a prior (the default).
    #[arg(long)]
    minimax: bool,
}

impl PriorArgs {
    fn prior(&self) -> Prior {
        match self.eta {
            Some(e) => Prior::Bayesian(e),
            None => Prior::Minimax,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Sampled,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, default_value_t = 100_000)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "exact")]
    mode: ModeArg,
    /// `ideal` or `alpha=A,theta=T`.
    #[arg(long, default_value = "ideal", value_parser = parse_kerr)]
    kerr: KerrProbeModel,
}

impl RunArgs {
    fn config(&self, prior: Prior) -> ExperimentConfig {
        let mode = match self.mode {
            ModeArg::Exact => Mode::ExactAmplitude,
            ModeArg::Sampled => Mode::SampledBranches,
        };
        ExperimentConfig { trials: self.trials, prior, seed: self.seed, kerr: self.kerr, mode, ..Default::default() }
    }
}

fn parse_kerr(s: &str) -> Result<KerrProbeModel, String> {
    if s == "ideal" {
        return Ok(KerrProbeModel::IDEAL);
    }
    let (mut alpha, mut theta) = (None, None);
    for part in s.split(',') {
        let (k, v) = part.split_once('=').ok_or_else(|| format!("expected key=value, got `{part}`"))?;
        let v: f64 = v.trim().parse().map_err(|e| format!("{k}: {e}"))?;
        match k.trim() {
            "alpha" => alpha = Some(v),
            "theta" => theta = Some(v),
            other => return Err(format!("unknown kerr parameter `{other}`")),
        }
    }
    match (alpha, theta) {
        (Some(a), Some(t)) => KerrProbeModel::physical(a, t).map_err(|e| e.to_string()),
        _ => Err("kerr needs both alpha and theta".into()),
    }
}

/// A check that ran and did not pass.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
struct CheckFailed(String);

fn write_or_print(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            println!("{}", text.trim_end());
            Ok(())
        }
    }
}

fn is_csv(p: Option<&Path>) -> bool {
    p.and_then(Path::extension).is_some_and(|e| e.eq_ignore_ascii_case("csv"))
}

fn read_matrix(p: &Path) -> Result<Matrix> {
    let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
    Ok(MatrixJson::parse(&text)?.to_matrix()?)
}

fn summarize(r: &Report) {
    eprintln!(
        "success {:.6} +- {:.6}, inconclusive {:.6}, wrong {:.3e} over {} trials ({} pathway, {:.2} s)",
        r.success_rate, r.stderr["success_rate"], r.inconclusive_rate, r.wrong_rate, r.counts.trials, r.pathway, r.wall_time_s
    );
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Montecarlo { prior, run, generic, out } => {
            let mut config = run.config(prior.prior());
            if generic {
                config.pathway = Pathway::Generic;
            }
            let report = montecarlo(&config)?;
            summarize(&report);
            let text = if is_csv(out.as_deref()) { report.to_csv() } else { report.to_json() };
            write_or_print(out.as_deref(), &text)
        }
        Command::Sweep { etas, run, out } => {
            let reports = sweep_eta(&etas, &run.config(Prior::Minimax))?;
            for r in &reports {
                summarize(r);
            }
            let text = if is_csv(out.as_deref()) {
                sweep_csv(&reports)
            } else {
                serde_json::to_string_pretty(&reports)?
            };
            write_or_print(out.as_deref(), &text)
        }
        Command::Povm { action: PovmAction::Dump { prior, out } } => {
            let povm = optimal_povm::<f64>(prior.prior())?;
            let doc = json!({
                "regime": povm.regime,
                "eta1": povm.eta1,
                "pi1": MatrixJson::from_matrix(&povm.pi1),
                "pi2": MatrixJson::from_matrix(&povm.pi2),
                "pi0": MatrixJson::from_matrix(&povm.pi0),
            });
            write_or_print(out.as_deref(), &serde_json::to_string_pretty(&doc)?)
        }
        Command::Decompose { input, out, tol } => {
            let net = reck_decompose(&read_matrix(&input)?, tol)?;
            eprintln!("{} modes, {} beam splitters, {} phase shifters", net.modes, net.splitter_count(), net.phase_count());
            write_or_print(out.as_deref(), &net.to_csv())
        }
        Command::Verify { net, against, tol } => {
            let text = fs::read_to_string(&net).with_context(|| format!("reading {}", net.display()))?;
            let net = BeamSplitterNetwork::from_csv(&text)?;
            let target = read_matrix(&against)?;
            let built = reck_reconstruct(&net)?;
            if built.rows() != target.rows() || built.cols() != target.cols() {
                return Err(CheckFailed(format!(
                    "netlist realizes {}x{} but target is {}x{}",
                    built.rows(),
                    built.cols(),
                    target.rows(),
                    target.cols()
                ))
                .into());
            }
            let err = built.max_abs_diff(&target);
            println!("{}", json!({ "max_abs_error": err, "tol": tol, "ok": err <= tol }));
            if err <= tol {
                Ok(())
            } else {
                Err(CheckFailed(format!("reconstruction error {err:e} exceeds {tol:e}")).into())
            }
        }
        Command::QndError { alpha, theta } => {
            let model = KerrProbeModel::physical(alpha, theta)?;
            let rate = kerr_error_rate(&model)?;
            println!("{}", json!({ "alpha": alpha, "theta": theta, "separation": model.separation(), "error_rate": rate }));
            Ok(())
        }
        Command::Trial { prior, seed, index, kerr } => {
            let exp = Experiment::new(ExperimentConfig { trials: 1, prior: prior.prior(), seed, kerr, ..Default::default() })?;
            println!("{}", exp.run_trial(index)?.record.to_json());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            let validation = e.downcast_ref::<qdisc_core::Error>().is_some() || e.downcast_ref::<CheckFailed>().is_some();
            ExitCode::from(if validation { 2 } else { 1 })
        }
    }
}
