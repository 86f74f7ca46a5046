use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use crate::error::Result;
use crate::linalg::ComplexMatrix;
use crate::protocols::{Event, ProtocolTranscript};
use crate::qstate::gates::{identity, pauli_x, pauli_y, pauli_z, zx_plane_basis};
use crate::qstate::{bell_state, BellState, PureState};
use crate::rng::SimRng;

use super::postprocess::{estimate_qber, privacy_amplify, reconcile_logged, sift};
use super::{AbortReason, AdversaryModel, Basis, Bb84Config, Bb84Session, EveRecord, Verdict};

// Independent generator streams, so that e.g. a zero-probability channel
// consumes nothing that the honest parties would otherwise have drawn.
const ALICE: u64 = 0;
const BOB: u64 = 1;
const CHANNEL: u64 = 2;
const PUBLIC: u64 = 3;
const HASH: u64 = 4;
const CHSH: u64 = 5;

struct Channel {
    model: AdversaryModel,
    rng: SimRng,
    paulis: [ComplexMatrix; 4],
    eve: Option<EveRecord>,
}

impl Channel {
    fn new(config: &Bb84Config) -> Self {
        Channel {
            model: config.adversary,
            rng: SimRng::new(config.seed.stream(CHANNEL)),
            paulis: [identity(), pauli_x(), pauli_y(), pauli_z()],
            eve: config.adversary.intercepts().then(|| EveRecord {
                bases: Vec::with_capacity(config.num_qubits_sent),
                bits: Vec::with_capacity(config.num_qubits_sent),
            }),
        }
    }

    /// Acts on `qubit` of `state` in transit. `record` says whether Eve's
    /// result belongs in the oracle record.
    fn act(&mut self, state: PureState, qubit: usize, record: bool) -> Result<PureState> {
        let eve_basis = match self.model {
            AdversaryModel::None => return Ok(state),
            AdversaryModel::DepolarizingNoise { p } => {
                if self.rng.gen_bool(p) {
                    let k = self.rng.gen_below(4) as usize;
                    return state.apply_gate(&self.paulis[k], &[qubit]);
                }
                return Ok(state);
            }
            AdversaryModel::InterceptResendZx => Basis::from_bit(self.rng.coin()),
            AdversaryModel::InterceptResendFixed { basis } => basis,
        };
        // Her measurement leaves the qubit in the basis state she read,
        // which is exactly what she resends.
        let m = state.measure_in_basis(&[qubit], &eve_basis.matrix(), &mut self.rng)?;
        if record {
            let eve = self
                .eve
                .as_mut()
                .expect("intercepting channel keeps a record");
            eve.bases.push(eve_basis);
            eve.bits.push(m.outcome_index as u8);
        }
        Ok(m.post_state)
    }
}

fn random_bases(n: usize, rng: &mut SimRng) -> Vec<Basis> {
    (0..n).map(|_| Basis::from_bit(rng.coin())).collect()
}

fn bases_as_bits(bases: &[Basis]) -> Vec<u8> {
    bases.iter().map(|b| b.bit()).collect()
}

fn message(transcript: &mut ProtocolTranscript, sender: &str, receiver: &str, bits: Vec<u8>) {
    transcript.record(Event::ClassicalMessage {
        sender: sender.into(),
        receiver: receiver.into(),
        bits,
    });
}

/// Prepare-and-measure BB84.
///
/// Alice sends each random bit in a random one of Z and X, the channel
/// applies the adversary, Bob measures in his own random basis. The rest is
/// public discussion: basis announcement, sifting, error estimation on a
/// random check subset, parity reconciliation and hashing.
pub fn bb84_run(config: &Bb84Config) -> Result<Bb84Session> {
    config.validate()?;
    let n = config.num_qubits_sent;
    let mut alice_rng = SimRng::new(config.seed.stream(ALICE));
    let mut bob_rng = SimRng::new(config.seed.stream(BOB));
    let mut channel = Channel::new(config);

    let alice_bits: Vec<u8> = (0..n).map(|_| alice_rng.coin() as u8).collect();
    let alice_bases = random_bases(n, &mut alice_rng);
    let bob_bases = random_bases(n, &mut bob_rng);
    let (z_basis, x_basis) = (Basis::Z.matrix(), Basis::X.matrix());

    let mut bob_bits = Vec::with_capacity(n);
    for i in 0..n {
        let basis = match alice_bases[i] {
            Basis::Z => &z_basis,
            Basis::X => &x_basis,
        };
        let sent = PureState::new(basis.col(alice_bits[i] as usize))?;
        let arrived = channel.act(sent, 0, true)?;
        let bob_basis = match bob_bases[i] {
            Basis::Z => &z_basis,
            Basis::X => &x_basis,
        };
        let m = arrived.measure_in_basis(&[0], bob_basis, &mut bob_rng)?;
        bob_bits.push(m.outcome_index as u8);
    }

    let mut transcript = ProtocolTranscript::new();
    transcript.record(Event::Prepare {
        label: format!("{n} qubits, random bits in random z/x bases"),
        qubits: Vec::new(),
    });
    finish(
        config,
        Raw {
            alice_bits,
            alice_bases,
            bob_bases,
            bob_key_bits: bob_bits.clone(),
            bob_bits,
            chsh: None,
            eve: channel.eve,
        },
        transcript,
    )
}

/// Entanglement-based BB84.
///
/// A source hands out singlets; the channel acts on Bob's half. Both
/// measure in random Z/X bases and Bob flips every bit, since matching
/// bases give opposite results on a singlet. When `chsh_pairs > 0` a
/// further batch of pairs is measured at the CHSH angles and the session
/// aborts unless the score exceeds 2.
pub fn bb84_entangled_run(config: &Bb84Config) -> Result<Bb84Session> {
    config.validate()?;
    let n = config.num_qubits_sent;
    let mut alice_rng = SimRng::new(config.seed.stream(ALICE));
    let mut bob_rng = SimRng::new(config.seed.stream(BOB));
    let mut channel = Channel::new(config);
    let singlet = bell_state(BellState::PsiMinus);

    let alice_bases = random_bases(n, &mut alice_rng);
    let bob_bases = random_bases(n, &mut bob_rng);
    let mut alice_bits = Vec::with_capacity(n);
    let mut bob_bits = Vec::with_capacity(n);
    for i in 0..n {
        let pair = channel.act(singlet.clone(), 1, true)?;
        let a = pair.measure_in_basis(&[0], &alice_bases[i].matrix(), &mut alice_rng)?;
        let b = a
            .post_state
            .measure_in_basis(&[1], &bob_bases[i].matrix(), &mut bob_rng)?;
        alice_bits.push(a.outcome_index as u8);
        bob_bits.push(b.outcome_index as u8);
    }
    let bob_key_bits = bob_bits.iter().map(|b| b ^ 1).collect();

    let mut transcript = ProtocolTranscript::new();
    transcript.record(Event::Prepare {
        label: format!("{n} singlet pairs"),
        qubits: Vec::new(),
    });
    let chsh = if config.chsh_pairs > 0 {
        Some(chsh_score(
            config.chsh_pairs,
            &mut channel,
            &singlet,
            &mut transcript,
            config,
        )?)
    } else {
        None
    };
    finish(
        config,
        Raw {
            alice_bits,
            alice_bases,
            bob_bases,
            bob_bits,
            bob_key_bits,
            chsh,
            eve: channel.eve,
        },
        transcript,
    )
}

/// CHSH score `|E(a0,b0) - E(a0,b1) + E(a1,b0) + E(a1,b1)|` with Alice at
/// 0 or pi/2 and Bob at pi/4 or 3pi/4 in the z-x plane.
fn chsh_score(
    pairs: usize,
    channel: &mut Channel,
    singlet: &PureState,
    transcript: &mut ProtocolTranscript,
    config: &Bb84Config,
) -> Result<f64> {
    let mut rng = SimRng::new(config.seed.stream(CHSH));
    let alice_bases = [zx_plane_basis(0.0), zx_plane_basis(FRAC_PI_2)];
    let bob_bases = [zx_plane_basis(FRAC_PI_4), zx_plane_basis(3.0 * FRAC_PI_4)];
    let mut sums = [[0i64; 2]; 2];
    let mut counts = [[0i64; 2]; 2];
    let mut settings_a = Vec::with_capacity(pairs);
    let mut settings_b = Vec::with_capacity(pairs);
    for _ in 0..pairs {
        let (x, y) = (rng.coin() as usize, rng.coin() as usize);
        let pair = channel.act(singlet.clone(), 1, false)?;
        let a = pair.measure_in_basis(&[0], &alice_bases[x], &mut rng)?;
        let b = a
            .post_state
            .measure_in_basis(&[1], &bob_bases[y], &mut rng)?;
        let product = if a.outcome_index == b.outcome_index {
            1
        } else {
            -1
        };
        sums[x][y] += product;
        counts[x][y] += 1;
        settings_a.push(x as u8);
        settings_b.push(y as u8);
    }
    message(transcript, "alice", "bob", settings_a);
    message(transcript, "bob", "alice", settings_b);
    let e = |x: usize, y: usize| {
        if counts[x][y] == 0 {
            0.0
        } else {
            sums[x][y] as f64 / counts[x][y] as f64
        }
    };
    Ok((e(0, 0) - e(0, 1) + e(1, 0) + e(1, 1)).abs())
}

struct Raw {
    alice_bits: Vec<u8>,
    alice_bases: Vec<Basis>,
    bob_bases: Vec<Basis>,
    bob_bits: Vec<u8>,
    /// Bob's bits as he uses them for the key.
    bob_key_bits: Vec<u8>,
    chsh: Option<f64>,
    eve: Option<EveRecord>,
}

/// Public discussion, common to both variants.
fn finish(
    config: &Bb84Config,
    raw: Raw,
    mut transcript: ProtocolTranscript,
) -> Result<Bb84Session> {
    let mut public = SimRng::new(config.seed.stream(PUBLIC));
    message(
        &mut transcript,
        "alice",
        "bob",
        bases_as_bits(&raw.alice_bases),
    );
    message(
        &mut transcript,
        "bob",
        "alice",
        bases_as_bits(&raw.bob_bases),
    );
    let sifted = sift(
        &raw.alice_bases,
        &raw.bob_bases,
        &raw.alice_bits,
        &raw.bob_key_bits,
    )?;

    let mut session = Bb84Session {
        config: config.clone(),
        alice_bits: raw.alice_bits,
        alice_bases: raw.alice_bases,
        bob_bases: raw.bob_bases,
        bob_bits: raw.bob_bits,
        sifted_alice: sifted.alice,
        sifted_bob: sifted.bob,
        retained_indices: sifted.retained_indices,
        check_indices: Vec::new(),
        qber_estimate: 0.0,
        raw_key_alice: Vec::new(),
        raw_key_bob: Vec::new(),
        reconciliation: None,
        chsh: raw.chsh,
        verdict: Verdict::Aborted {
            reason: AbortReason::EmptySift,
        },
        eve: raw.eve,
        transcript,
    };
    let len = session.sifted_alice.len();
    if len == 0 {
        return Ok(session);
    }

    let checks = ((config.check_fraction * len as f64).round() as usize).clamp(1, len);
    session.check_indices = public.sample_indices(len, checks);
    let mut mask = vec![0u8; len];
    for &i in &session.check_indices {
        mask[i] = 1;
    }
    message(&mut session.transcript, "alice", "bob", mask);
    let values = |key: &[u8]| {
        session
            .check_indices
            .iter()
            .map(|&i| key[i])
            .collect::<Vec<_>>()
    };
    let (alice_checks, bob_checks) = (values(&session.sifted_alice), values(&session.sifted_bob));
    message(&mut session.transcript, "alice", "bob", alice_checks);
    message(&mut session.transcript, "bob", "alice", bob_checks);
    let est = estimate_qber(
        &session.sifted_alice,
        &session.sifted_bob,
        &session.check_indices,
    )?;
    session.qber_estimate = est.qber;
    session.raw_key_alice = est.remaining_alice;
    session.raw_key_bob = est.remaining_bob;

    if session.qber_estimate > config.qber_abort_threshold {
        session.verdict = Verdict::Aborted {
            reason: AbortReason::QberAboveThreshold,
        };
        return Ok(session);
    }
    if session.chsh.is_some_and(|s| s <= 2.0) {
        session.verdict = Verdict::Aborted {
            reason: AbortReason::NoBellViolation,
        };
        return Ok(session);
    }

    let transcript = &mut session.transcript;
    let recon = reconcile_logged(
        &session.raw_key_alice,
        &session.raw_key_bob,
        config.recon_rounds,
        &mut public,
        &mut |pa, pb| {
            message(transcript, "alice", "bob", pa);
            message(transcript, "bob", "alice", pb);
        },
    )?;

    let out_len = config
        .length_rule
        .output_length(recon.corrected_alice.len(), session.qber_estimate);
    // Both parties seed the hash from the same public value.
    let hash_seed = config.seed.stream(HASH);
    let alice_key = privacy_amplify(&recon.corrected_alice, out_len, &mut SimRng::new(hash_seed))?;
    let bob_key = privacy_amplify(&recon.corrected_bob, out_len, &mut SimRng::new(hash_seed))?;
    session.reconciliation = Some(recon);
    session.verdict = Verdict::Completed { alice_key, bob_key };
    Ok(session)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qkd::LengthRule;

    #[test]
    fn clean_channel() {
        let s = bb84_run(&Bb84Config::new(10_000, 1)).unwrap();
        assert_eq!(s.qber_estimate, 0.0);
        assert_eq!(s.sifted_alice, s.sifted_bob);
        assert!((s.sift_fraction() - 0.5).abs() < 0.02);
        assert!(s.verdict.keys_match());
        assert!(s.eve.is_none());
    }

    #[test]
    fn zero_noise_matches_clean_channel() {
        let clean = bb84_run(&Bb84Config::new(2_000, 5)).unwrap();
        let noisy = bb84_run(
            &Bb84Config::new(2_000, 5).with_adversary(AdversaryModel::DepolarizingNoise { p: 0.0 }),
        )
        .unwrap();
        assert_eq!(clean.bob_bits, noisy.bob_bits);
        assert_eq!(clean.verdict, noisy.verdict);
        assert_eq!(clean.transcript, noisy.transcript);
    }

    #[test]
    fn fixed_basis_eve_spares_her_basis() {
        let cfg = Bb84Config::new(20_000, 2)
            .with_adversary(AdversaryModel::InterceptResendFixed { basis: Basis::Z });
        let s = bb84_run(&cfg).unwrap();
        for &i in &s.retained_indices {
            if s.alice_bases[i] == Basis::Z {
                assert_eq!(s.alice_bits[i], s.bob_bits[i]);
                assert_eq!(s.eve.as_ref().unwrap().bits[i], s.alice_bits[i]);
            }
        }
        // Errors only on the X half of the sifted rounds, at rate 1/2.
        assert!((s.qber_estimate - 0.25).abs() < 0.04, "{}", s.qber_estimate);
    }

    #[test]
    fn entangled_raw_outcomes_anticorrelate() {
        let mut cfg = Bb84Config::new(5_000, 3);
        cfg.chsh_pairs = 2_000;
        let s = bb84_entangled_run(&cfg).unwrap();
        for &i in &s.retained_indices {
            assert_ne!(s.alice_bits[i], s.bob_bits[i]);
        }
        assert_eq!(s.sifted_alice, s.sifted_bob);
        assert!(s.chsh.unwrap() > 2.0);
        assert!(s.verdict.keys_match());
    }

    #[test]
    fn intercept_kills_bell_violation() {
        let mut cfg = Bb84Config::new(1_000, 4).with_adversary(AdversaryModel::InterceptResendZx);
        cfg.qber_abort_threshold = 0.99;
        cfg.chsh_pairs = 4_000;
        let s = bb84_entangled_run(&cfg).unwrap();
        assert!(s.chsh.unwrap() < 2.0);
        assert_eq!(
            s.verdict,
            Verdict::Aborted {
                reason: AbortReason::NoBellViolation
            }
        );
    }

    #[test]
    fn transcript_carries_public_discussion() {
        let mut cfg = Bb84Config::new(400, 6);
        cfg.recon_rounds = 2;
        cfg.length_rule = LengthRule::KeepAll;
        let s = bb84_run(&cfg).unwrap();
        // bases x2, check mask, check values x2, parities x2 per round
        assert_eq!(s.transcript.messages().count(), 2 + 1 + 2 + 4);
        assert_eq!(
            s.verdict.final_key().unwrap().len(),
            s.reconciliation.unwrap().corrected_alice.len()
        );
    }

    #[test]
    fn invalid_config_rejected() {
        assert!(bb84_run(&Bb84Config::new(0, 1)).is_err());
    }
}
