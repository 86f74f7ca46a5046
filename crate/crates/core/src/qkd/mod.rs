//! BB84 key distribution, prepare-and-measure and entanglement-based.
//!
//! Sessions simulate every qubit on the exact state-vector engine. The
//! transcript keeps only the public discussion; per-qubit ground truth lives
//! in the session fields, and whatever an eavesdropper learned is kept in a
//! separate oracle record that honest parties would never see.

mod bb84;
mod postprocess;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{QinfoError, Result};
use crate::linalg::ComplexMatrix;
use crate::protocols::ProtocolTranscript;
use crate::qstate::gates::{identity, x_basis};
use crate::rng::RngSeed;

pub use bb84::{bb84_entangled_run, bb84_run};
pub use postprocess::{
    estimate_qber, privacy_amplify, reconcile_parity, sift, Gf2Matrix, LengthRule, QberEstimate,
    ReconciliationResult, Sifted,
};

/// Measurement basis for one BB84 round.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    Z,
    X,
}

impl Basis {
    /// Columns are the basis states for bit 0 and bit 1.
    pub fn matrix(self) -> ComplexMatrix {
        match self {
            Basis::Z => identity(),
            Basis::X => x_basis(),
        }
    }

    pub fn bit(self) -> u8 {
        match self {
            Basis::Z => 0,
            Basis::X => 1,
        }
    }

    pub fn from_bit(bit: bool) -> Self {
        if bit {
            Basis::X
        } else {
            Basis::Z
        }
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Basis::Z => "z",
            Basis::X => "x",
        })
    }
}

/// What happens to each qubit between Alice and Bob.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum AdversaryModel {
    #[default]
    None,
    /// Eve measures in Z or X at random and resends what she saw.
    InterceptResendZx,
    /// Eve always measures in one basis and resends.
    InterceptResendFixed { basis: Basis },
    /// With probability `p` the qubit is fully depolarized.
    DepolarizingNoise { p: f64 },
}

impl AdversaryModel {
    pub fn validate(&self) -> Result<()> {
        match *self {
            AdversaryModel::DepolarizingNoise { p } if !(0.0..=1.0).contains(&p) => Err(
                QinfoError::InvalidConfig(format!("depolarizing probability {p} outside [0, 1]")),
            ),
            _ => Ok(()),
        }
    }

    fn intercepts(&self) -> bool {
        matches!(
            self,
            AdversaryModel::InterceptResendZx | AdversaryModel::InterceptResendFixed { .. }
        )
    }
}

/// Short form used on the command line: `none`, `intercept-zx`,
/// `intercept-fixed:z`, `intercept-fixed:x`, `depolarize:<p>`.
impl FromStr for AdversaryModel {
    type Err = QinfoError;

    fn from_str(s: &str) -> Result<Self> {
        let model = match s {
            "none" => AdversaryModel::None,
            "intercept-zx" => AdversaryModel::InterceptResendZx,
            "intercept-fixed:z" => AdversaryModel::InterceptResendFixed { basis: Basis::Z },
            "intercept-fixed:x" => AdversaryModel::InterceptResendFixed { basis: Basis::X },
            _ => match s.strip_prefix("depolarize:") {
                Some(p) => {
                    let p: f64 = p.parse().map_err(|_| {
                        QinfoError::InvalidConfig(format!("bad depolarizing probability in {s:?}"))
                    })?;
                    AdversaryModel::DepolarizingNoise { p }
                }
                None => {
                    return Err(QinfoError::InvalidConfig(format!(
                        "unknown adversary {s:?}"
                    )))
                }
            },
        };
        model.validate()?;
        Ok(model)
    }
}

impl fmt::Display for AdversaryModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AdversaryModel::None => f.write_str("none"),
            AdversaryModel::InterceptResendZx => f.write_str("intercept-zx"),
            AdversaryModel::InterceptResendFixed { basis } => write!(f, "intercept-fixed:{basis}"),
            AdversaryModel::DepolarizingNoise { p } => write!(f, "depolarize:{p}"),
        }
    }
}

pub const DEFAULT_CHECK_FRACTION: f64 = 0.25;
pub const DEFAULT_ABORT_THRESHOLD: f64 = 0.11;
pub const DEFAULT_RECON_ROUNDS: usize = 4;
pub const DEFAULT_CHSH_PAIRS: usize = 10_000;

fn default_check_fraction() -> f64 {
    DEFAULT_CHECK_FRACTION
}

fn default_abort_threshold() -> f64 {
    DEFAULT_ABORT_THRESHOLD
}

fn default_recon_rounds() -> usize {
    DEFAULT_RECON_ROUNDS
}

fn default_chsh_pairs() -> usize {
    DEFAULT_CHSH_PAIRS
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Bb84Config {
    pub num_qubits_sent: usize,
    #[serde(default = "default_check_fraction")]
    pub check_fraction: f64,
    #[serde(default = "default_abort_threshold")]
    pub qber_abort_threshold: f64,
    #[serde(default)]
    pub adversary: AdversaryModel,
    pub seed: RngSeed,
    #[serde(default = "default_recon_rounds")]
    pub recon_rounds: usize,
    #[serde(default)]
    pub length_rule: LengthRule,
    /// Extra singlet pairs spent on the CHSH check in the entangled
    /// variant. Zero skips the check.
    #[serde(default = "default_chsh_pairs")]
    pub chsh_pairs: usize,
}

impl Bb84Config {
    pub fn new(num_qubits_sent: usize, seed: impl Into<RngSeed>) -> Self {
        Bb84Config {
            num_qubits_sent,
            check_fraction: DEFAULT_CHECK_FRACTION,
            qber_abort_threshold: DEFAULT_ABORT_THRESHOLD,
            adversary: AdversaryModel::None,
            seed: seed.into(),
            recon_rounds: DEFAULT_RECON_ROUNDS,
            length_rule: LengthRule::default(),
            chsh_pairs: DEFAULT_CHSH_PAIRS,
        }
    }

    pub fn with_adversary(mut self, adversary: AdversaryModel) -> Self {
        self.adversary = adversary;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_qubits_sent == 0 {
            return Err(QinfoError::InvalidConfig(
                "num_qubits_sent must be positive".into(),
            ));
        }
        if !(self.check_fraction > 0.0 && self.check_fraction < 1.0) {
            return Err(QinfoError::InvalidConfig(format!(
                "check_fraction {} outside (0, 1)",
                self.check_fraction
            )));
        }
        // About half the rounds survive sifting.
        if self.check_fraction * self.num_qubits_sent as f64 / 2.0 < 1.0 {
            return Err(QinfoError::InvalidConfig(
                "fewer than one check bit expected; send more qubits or raise check_fraction"
                    .into(),
            ));
        }
        if !(self.qber_abort_threshold > 0.0 && self.qber_abort_threshold < 1.0) {
            return Err(QinfoError::InvalidConfig(format!(
                "qber_abort_threshold {} outside (0, 1)",
                self.qber_abort_threshold
            )));
        }
        self.adversary.validate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AbortReason {
    /// Nothing survived sifting, so there was nothing to check.
    EmptySift,
    QberAboveThreshold,
    /// The CHSH score of the entangled source did not exceed 2.
    NoBellViolation,
}

impl AbortReason {
    pub fn as_str(self) -> &'static str {
        match self {
            AbortReason::EmptySift => "empty_sift",
            AbortReason::QberAboveThreshold => "qber_above_threshold",
            AbortReason::NoBellViolation => "no_bell_violation",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Verdict {
    /// Each party's amplified key. They agree unless reconciliation left
    /// an error behind.
    Completed {
        alice_key: Vec<u8>,
        bob_key: Vec<u8>,
    },
    Aborted {
        reason: AbortReason,
    },
}

impl Verdict {
    pub fn is_completed(&self) -> bool {
        matches!(self, Verdict::Completed { .. })
    }

    pub fn final_key(&self) -> Option<&[u8]> {
        match self {
            Verdict::Completed { alice_key, .. } => Some(alice_key),
            Verdict::Aborted { .. } => None,
        }
    }

    pub fn keys_match(&self) -> bool {
        matches!(self, Verdict::Completed { alice_key, bob_key } if alice_key == bob_key)
    }
}

/// Ground truth about the eavesdropper, one entry per intercepted qubit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EveRecord {
    pub bases: Vec<Basis>,
    pub bits: Vec<u8>,
}

#[derive(Debug, Clone)]
pub struct Bb84Session {
    pub config: Bb84Config,
    pub alice_bits: Vec<u8>,
    pub alice_bases: Vec<Basis>,
    pub bob_bases: Vec<Basis>,
    /// Bob's raw outcomes. In the entangled variant these are before his
    /// bit flip.
    pub bob_bits: Vec<u8>,
    pub sifted_alice: Vec<u8>,
    pub sifted_bob: Vec<u8>,
    /// Positions in the sent stream that survived sifting.
    pub retained_indices: Vec<usize>,
    /// Positions in the sifted key spent on error estimation.
    pub check_indices: Vec<usize>,
    pub qber_estimate: f64,
    /// Sifted remainder after the check bits are discarded.
    pub raw_key_alice: Vec<u8>,
    pub raw_key_bob: Vec<u8>,
    pub reconciliation: Option<ReconciliationResult>,
    pub chsh: Option<f64>,
    pub verdict: Verdict,
    pub eve: Option<EveRecord>,
    pub transcript: ProtocolTranscript,
}

impl Bb84Session {
    pub fn sift_fraction(&self) -> f64 {
        self.retained_indices.len() as f64 / self.config.num_qubits_sent as f64
    }

    /// Fraction of sifted positions where Eve's bit equals Alice's.
    pub fn adversary_agreement(&self) -> Option<f64> {
        let eve = self.eve.as_ref()?;
        if self.retained_indices.is_empty() {
            return None;
        }
        let agree = self
            .retained_indices
            .iter()
            .filter(|&&i| eve.bits[i] == self.alice_bits[i])
            .count();
        Some(agree as f64 / self.retained_indices.len() as f64)
    }

    pub fn report(&self) -> SessionReport {
        let final_len = match &self.verdict {
            Verdict::Completed { alice_key, .. } => alice_key.len(),
            Verdict::Aborted { .. } => 0,
        };
        SessionReport {
            config: self.config.clone(),
            qber: self.qber_estimate,
            sift_fraction: self.sift_fraction(),
            verdict: match &self.verdict {
                Verdict::Completed { .. } => "completed".into(),
                Verdict::Aborted { reason } => format!("aborted:{}", reason.as_str()),
            },
            key_length_raw: self.raw_key_alice.len(),
            key_length_final: final_len,
            keys_match: self.verdict.keys_match(),
            bits_disclosed: self.reconciliation.as_ref().map_or(0, |r| r.bits_disclosed),
            residual_mismatch: self
                .reconciliation
                .as_ref()
                .map_or(0, |r| r.residual_mismatch),
            chsh: self.chsh,
            adversary_agreement: self.adversary_agreement(),
        }
    }
}

/// Flat per-session summary for reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionReport {
    pub config: Bb84Config,
    pub qber: f64,
    pub sift_fraction: f64,
    pub verdict: String,
    pub key_length_raw: usize,
    pub key_length_final: usize,
    pub keys_match: bool,
    pub bits_disclosed: usize,
    pub residual_mismatch: usize,
    pub chsh: Option<f64>,
    /// Oracle-only: Eve's agreement with Alice on the sifted positions.
    pub adversary_agreement: Option<f64>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn adversary_strings_round_trip() {
        for s in [
            "none",
            "intercept-zx",
            "intercept-fixed:z",
            "intercept-fixed:x",
            "depolarize:0.2",
        ] {
            let m: AdversaryModel = s.parse().unwrap();
            assert_eq!(m.to_string(), s);
        }
        assert!("depolarize:1.5".parse::<AdversaryModel>().is_err());
        assert!("intercept".parse::<AdversaryModel>().is_err());
    }

    #[test]
    fn config_json_is_strict() {
        let cfg: Bb84Config =
            serde_json::from_str(r#"{"num_qubits_sent": 100, "seed": 3}"#).unwrap();
        assert_eq!(cfg, Bb84Config::new(100, 3));
        let typo = r#"{"num_qubits_sent": 100, "seed": 3, "chek_fraction": 0.2}"#;
        assert!(serde_json::from_str::<Bb84Config>(typo).is_err());
        let adv = r#"{"num_qubits_sent": 100, "seed": 3, "adversary": {"kind": "depolarizing_noise", "p": 0.1}}"#;
        let cfg: Bb84Config = serde_json::from_str(adv).unwrap();
        assert_eq!(cfg.adversary, AdversaryModel::DepolarizingNoise { p: 0.1 });
    }

    #[test]
    fn config_validation() {
        assert!(Bb84Config::new(0, 1).validate().is_err());
        assert!(Bb84Config::new(4, 1).validate().is_err());
        assert!(Bb84Config::new(100, 1).validate().is_ok());
        let mut c = Bb84Config::new(100, 1);
        c.check_fraction = 1.0;
        assert!(c.validate().is_err());
    }
}
