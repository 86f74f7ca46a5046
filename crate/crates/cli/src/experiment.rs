use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{Context, Result};
use rayon::prelude::*;
use serde::Serialize;

use qinfo::infotheory::{entanglement_entropy, ppt_class, schmidt_decompose, Cut};
use qinfo::protocols::{
    bloch_vector, entanglement_swap, superdense_encode_decode, teleport, tomography_single_qubit,
    ProtocolTranscript,
};
use qinfo::qkd::{bb84_entangled_run, bb84_run, AdversaryModel, Bb84Session, Verdict};
use qinfo::qstate::{DensityOperator, PureState};
use qinfo::random::haar_state;
use qinfo::rng::{RngSeed, SimRng};

use crate::config::{Command, ExperimentConfig};
use crate::report::{summarize, MetricSummary};
use crate::ConfigError;

const EXACT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Serialize)]
pub struct TrialRecord {
    pub trial: u64,
    /// Seed that replays this trial alone (`--seed <seed> --trials 1`).
    pub seed: u64,
    pub metrics: BTreeMap<String, f64>,
    #[serde(skip)]
    pub transcript: Option<ProtocolTranscript>,
    #[serde(skip)]
    pub violations: Vec<String>,
}

impl TrialRecord {
    fn new(trial: u64, seed: RngSeed) -> Self {
        TrialRecord {
            trial,
            seed: seed.0,
            metrics: BTreeMap::new(),
            transcript: None,
            violations: Vec::new(),
        }
    }

    fn set(&mut self, name: &str, value: f64) {
        self.metrics.insert(name.to_string(), value);
    }

    fn flag(&mut self, name: &str, value: bool) {
        self.set(name, if value { 1.0 } else { 0.0 });
    }

    fn require(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.violations
                .push(format!("trial {}: {}", self.trial, what()));
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: &'static str,
    pub config: ExperimentConfig,
    pub trials: Vec<TrialRecord>,
    pub summary: Vec<MetricSummary>,
    /// Broken protocol invariants; a nonempty list means exit status 3.
    pub violations: Vec<String>,
}

/// Runs every trial (in parallel, each on its own derived seed) and
/// assembles the report in trial order.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Report> {
    let given_state = match &cfg.state {
        Some(path) => Some(load_state(path)?),
        None => None,
    };
    let trials = if cfg.command == Command::Analyze {
        1
    } else {
        cfg.trials
    };
    let records = (0..trials)
        .into_par_iter()
        .map(|i| run_trial(cfg, i, cfg.seed.for_trial(i), given_state.as_ref()))
        .collect::<Result<Vec<_>>>()?;
    let summary = summarize(&records)?;
    let violations = records
        .iter()
        .flat_map(|r| r.violations.iter().cloned())
        .collect();
    Ok(Report {
        command: cfg.command.name(),
        config: cfg.clone(),
        trials: records,
        summary,
        violations,
    })
}

fn load_state(path: &Path) -> Result<PureState> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading state file {}", path.display()))
        .map_err(ConfigError::wrap)?;
    PureState::from_json(&text)
        .with_context(|| format!("parsing state file {}", path.display()))
        .map_err(ConfigError::wrap)
}

fn run_trial(
    cfg: &ExperimentConfig,
    trial: u64,
    seed: RngSeed,
    given: Option<&PureState>,
) -> Result<TrialRecord> {
    let mut rec = TrialRecord::new(trial, seed);
    let mut rng = SimRng::new(seed);
    match cfg.command {
        Command::Teleport => {
            let chi = match given {
                Some(s) => s.clone(),
                None => haar_state(1, &mut rng),
            };
            let out = teleport(&chi, &mut rng)?;
            let mixed = DensityOperator::maximally_mixed(1);
            let drift = out
                .bob_reduced_before_message
                .matrix()
                .max_abs_diff(mixed.matrix());
            rec.set("fidelity", out.fidelity_to_input);
            rec.set("bell_outcome", out.bell_outcome.readout() as f64);
            rec.set("bob_pre_message_drift", drift);
            rec.require(out.fidelity_to_input >= 1.0 - EXACT_TOL, || {
                format!("teleported fidelity {}", out.fidelity_to_input)
            });
            rec.require(drift <= EXACT_TOL, || {
                format!("Bob's pre-message state is off I/2 by {drift}")
            });
            rec.transcript = Some(out.transcript);
        }
        Command::Superdense => {
            let message = [rng.coin() as u8, rng.coin() as u8];
            let out = superdense_encode_decode(message, &mut rng)?;
            rec.set("message", (message[0] * 2 + message[1]) as f64);
            rec.flag("success", out.decoded == message);
            rec.require(out.decoded == message, || {
                format!("sent {message:?}, decoded {:?}", out.decoded)
            });
            rec.transcript = Some(out.transcript);
        }
        Command::Swap => {
            let out = entanglement_swap(&mut rng)?;
            rec.set("alice_outcome", out.alice_outcome.readout() as f64);
            rec.set("entropy_before", out.entropy_before);
            rec.set("entropy_after", out.entropy_after);
            rec.set("fidelity", out.fidelity_to_singlet);
            rec.require(out.fidelity_to_singlet >= 1.0 - EXACT_TOL, || {
                format!("swapped pair fidelity {}", out.fidelity_to_singlet)
            });
            rec.require((out.entropy_after - 1.0).abs() <= EXACT_TOL, || {
                format!("swapped pair entropy {}", out.entropy_after)
            });
            rec.transcript = Some(out.transcript);
        }
        Command::Tomography => {
            let state = match given {
                Some(s) => s.clone(),
                None => haar_state(1, &mut rng),
            };
            let truth = bloch_vector(&state)?;
            let est = tomography_single_qubit(&state, cfg.shots, &mut rng)?;
            let mut worst = 0.0f64;
            for (axis, (e, t)) in ["x", "y", "z"].iter().zip(est.bloch.iter().zip(truth)) {
                rec.set(axis, *e);
                rec.set(&format!("err_{axis}"), e - t);
                worst = worst.max((e - t).abs());
            }
            rec.set("max_abs_error", worst);
            rec.flag("outside_bloch_ball", est.outside_bloch_ball);
        }
        Command::Bb84 | Command::Bb84Entangled => {
            let bb = cfg.bb84_config(seed);
            let session = if cfg.command == Command::Bb84 {
                bb84_run(&bb)?
            } else {
                bb84_entangled_run(&bb)?
            };
            session_metrics(&mut rec, &session);
            rec.transcript = Some(session.transcript);
        }
        Command::Analyze => {
            let state = given.expect("analyze requires a state");
            let n = state.num_qubits();
            if cfg.cut >= n {
                return Err(ConfigError::msg(format!(
                    "--cut {} must be below the qubit count {n}",
                    cfg.cut
                )));
            }
            let cut = Cut::first(n, cfg.cut)?;
            let schmidt = schmidt_decompose(state, &cut)?;
            let (_, min_pt) = ppt_class(&state.to_density(), &cut)?;
            let side_a: Vec<usize> = (0..cfg.cut).collect();
            rec.set("num_qubits", n as f64);
            rec.set("entanglement_entropy", entanglement_entropy(state, &cut)?);
            rec.set("schmidt_rank", schmidt.rank() as f64);
            rec.flag("entangled", schmidt.rank() > 1);
            rec.set("reduced_purity", state.reduced_density(&side_a)?.purity());
            rec.set("partial_transpose_min_eigenvalue", min_pt);
        }
    }
    Ok(rec)
}

fn session_metrics(rec: &mut TrialRecord, s: &Bb84Session) {
    let r = s.report();
    rec.set("qber", r.qber);
    rec.set("sift_fraction", r.sift_fraction);
    rec.flag("completed", s.verdict.is_completed());
    rec.set("key_length_raw", r.key_length_raw as f64);
    rec.set("key_length_final", r.key_length_final as f64);
    rec.flag("keys_match", r.keys_match);
    rec.set("bits_disclosed", r.bits_disclosed as f64);
    rec.set("residual_mismatch", r.residual_mismatch as f64);
    if let Some(a) = r.adversary_agreement {
        rec.set("adversary_agreement", a);
    }
    if let Some(c) = r.chsh {
        rec.set("chsh", c);
    }
    if s.config.adversary == AdversaryModel::None {
        rec.require(s.sifted_alice == s.sifted_bob, || {
            "sifted keys differ on a clean channel".into()
        });
        if let Verdict::Completed { alice_key, bob_key } = &s.verdict {
            rec.require(alice_key == bob_key, || {
                "final keys differ on a clean channel".into()
            });
        }
    }
}
