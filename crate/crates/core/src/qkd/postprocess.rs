//! Classical post-processing shared by both key-distribution variants.

use serde::{Deserialize, Serialize};

use crate::error::{QinfoError, Result};
use crate::infotheory::binary_entropy;
use crate::rng::SimRng;

use super::Basis;

/// Output of [`sift`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sifted {
    pub alice: Vec<u8>,
    pub bob: Vec<u8>,
    pub retained_indices: Vec<usize>,
}

/// Keeps the rounds where both parties used the same basis, in order.
pub fn sift(
    alice_bases: &[Basis],
    bob_bases: &[Basis],
    alice_bits: &[u8],
    bob_bits: &[u8],
) -> Result<Sifted> {
    let n = alice_bases.len();
    if bob_bases.len() != n || alice_bits.len() != n || bob_bits.len() != n {
        return Err(QinfoError::LengthMismatch(format!(
            "sift inputs have lengths {}, {}, {}, {}",
            n,
            bob_bases.len(),
            alice_bits.len(),
            bob_bits.len()
        )));
    }
    let retained_indices: Vec<usize> = (0..n).filter(|&i| alice_bases[i] == bob_bases[i]).collect();
    Ok(Sifted {
        alice: retained_indices.iter().map(|&i| alice_bits[i]).collect(),
        bob: retained_indices.iter().map(|&i| bob_bits[i]).collect(),
        retained_indices,
    })
}

/// Output of [`estimate_qber`].
#[derive(Debug, Clone, PartialEq)]
pub struct QberEstimate {
    pub qber: f64,
    pub remaining_alice: Vec<u8>,
    pub remaining_bob: Vec<u8>,
}

/// Compares the sifted keys on `check_indices` and drops those positions
/// from both.
///
/// The check set must be nonempty and free of duplicates.
pub fn estimate_qber(
    sifted_alice: &[u8],
    sifted_bob: &[u8],
    check_indices: &[usize],
) -> Result<QberEstimate> {
    let n = sifted_alice.len();
    if sifted_bob.len() != n {
        return Err(QinfoError::LengthMismatch(format!(
            "keys of length {} and {}",
            n,
            sifted_bob.len()
        )));
    }
    if check_indices.is_empty() {
        return Err(QinfoError::InvalidConfig("check subset is empty".into()));
    }
    let mut checked = vec![false; n];
    for &i in check_indices {
        if i >= n {
            return Err(QinfoError::IndexOutOfRange { index: i, bound: n });
        }
        if checked[i] {
            return Err(QinfoError::InvalidConfig(format!(
                "check index {i} repeated"
            )));
        }
        checked[i] = true;
    }
    let errors = check_indices
        .iter()
        .filter(|&&i| sifted_alice[i] != sifted_bob[i])
        .count();
    let keep =
        |key: &[u8]| -> Vec<u8> { (0..n).filter(|&i| !checked[i]).map(|i| key[i]).collect() };
    Ok(QberEstimate {
        qber: errors as f64 / check_indices.len() as f64,
        remaining_alice: keep(sifted_alice),
        remaining_bob: keep(sifted_bob),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReconciliationResult {
    pub corrected_alice: Vec<u8>,
    pub corrected_bob: Vec<u8>,
    /// Parities announced in public, summed over rounds.
    pub bits_disclosed: usize,
    /// Positions where the corrected keys still differ. Only a simulator
    /// can know this.
    pub residual_mismatch: usize,
}

/// Parity-comparison reconciliation.
///
/// Each round pairs up positions at random (an odd one out is dropped),
/// compares the parity of every pair, drops both bits of a pair whose
/// parities differ and keeps only the first bit of a pair whose parities
/// agree.
pub fn reconcile_parity(
    alice_key: &[u8],
    bob_key: &[u8],
    rounds: usize,
    rng: &mut SimRng,
) -> Result<ReconciliationResult> {
    reconcile_logged(alice_key, bob_key, rounds, rng, &mut |_, _| {})
}

/// [`reconcile_parity`], handing each round's announced parities (Alice's,
/// then Bob's) to `announce`.
pub(crate) fn reconcile_logged(
    alice_key: &[u8],
    bob_key: &[u8],
    rounds: usize,
    rng: &mut SimRng,
    announce: &mut dyn FnMut(Vec<u8>, Vec<u8>),
) -> Result<ReconciliationResult> {
    if alice_key.len() != bob_key.len() {
        return Err(QinfoError::LengthMismatch(format!(
            "keys of length {} and {}",
            alice_key.len(),
            bob_key.len()
        )));
    }
    let mut alice = alice_key.to_vec();
    let mut bob = bob_key.to_vec();
    let mut bits_disclosed = 0;
    for _ in 0..rounds {
        let mut order: Vec<usize> = (0..alice.len()).collect();
        rng.shuffle(&mut order);
        let mut next_alice = Vec::with_capacity(alice.len() / 2);
        let mut next_bob = Vec::with_capacity(alice.len() / 2);
        let mut parities_alice = Vec::with_capacity(alice.len() / 2);
        let mut parities_bob = Vec::with_capacity(alice.len() / 2);
        for pair in order.chunks_exact(2) {
            let (i, j) = (pair[0], pair[1]);
            let (pa, pb) = (alice[i] ^ alice[j], bob[i] ^ bob[j]);
            parities_alice.push(pa);
            parities_bob.push(pb);
            if pa == pb {
                next_alice.push(alice[i]);
                next_bob.push(bob[i]);
            }
        }
        bits_disclosed += parities_alice.len();
        announce(parities_alice, parities_bob);
        alice = next_alice;
        bob = next_bob;
    }
    let residual_mismatch = alice.iter().zip(&bob).filter(|(a, b)| a != b).count();
    Ok(ReconciliationResult {
        corrected_alice: alice,
        corrected_bob: bob,
        bits_disclosed,
        residual_mismatch,
    })
}

/// Binary matrix with rows packed into 64-bit words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gf2Matrix {
    rows: usize,
    cols: usize,
    words_per_row: usize,
    words: Vec<u64>,
}

impl Gf2Matrix {
    fn zeros(rows: usize, cols: usize) -> Self {
        let words_per_row = cols.div_ceil(64);
        Gf2Matrix {
            rows,
            cols,
            words_per_row,
            words: vec![0; rows * words_per_row],
        }
    }

    /// Uniformly random `rows x cols` matrix.
    pub fn random(rows: usize, cols: usize, rng: &mut SimRng) -> Self {
        let mut m = Self::zeros(rows, cols);
        let tail = cols % 64;
        for r in 0..rows {
            for w in 0..m.words_per_row {
                let mut word = rng.next_u64();
                if w == m.words_per_row - 1 && tail != 0 {
                    word &= (1u64 << tail) - 1;
                }
                m.words[r * m.words_per_row + w] = word;
            }
        }
        m
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.words[i * m.words_per_row + i / 64] |= 1 << (i % 64);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u8 {
        ((self.words[r * self.words_per_row + c / 64] >> (c % 64)) & 1) as u8
    }

    /// Matrix-vector product over GF(2).
    pub fn apply(&self, key: &[u8]) -> Result<Vec<u8>> {
        if key.len() != self.cols {
            return Err(QinfoError::LengthMismatch(format!(
                "key has {} bits, hash expects {}",
                key.len(),
                self.cols
            )));
        }
        let mut packed = vec![0u64; self.words_per_row];
        for (i, &b) in key.iter().enumerate() {
            packed[i / 64] |= u64::from(b & 1) << (i % 64);
        }
        Ok((0..self.rows)
            .map(|r| {
                let row = &self.words[r * self.words_per_row..(r + 1) * self.words_per_row];
                let ones: u32 = row
                    .iter()
                    .zip(&packed)
                    .map(|(a, b)| (a & b).count_ones())
                    .sum();
                (ones & 1) as u8
            })
            .collect())
    }
}

/// Hashes `key` down to `output_length` bits with a random GF(2) matrix
/// drawn from `rng`. Parties holding equal generators get the same matrix.
pub fn privacy_amplify(key: &[u8], output_length: usize, rng: &mut SimRng) -> Result<Vec<u8>> {
    if output_length > key.len() {
        return Err(QinfoError::OutputTooLong {
            requested: output_length,
            available: key.len(),
        });
    }
    Gf2Matrix::random(output_length, key.len(), rng).apply(key)
}

/// How many bits survive amplification.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LengthRule {
    /// `floor(n * (1 - 2 h2(qber)))`, at least zero. A leakage heuristic,
    /// not a security bound.
    #[default]
    BinaryEntropy,
    /// No compression.
    KeepAll,
}

impl LengthRule {
    pub fn output_length(self, key_length: usize, qber: f64) -> usize {
        match self {
            LengthRule::BinaryEntropy => {
                let frac = 1.0 - 2.0 * binary_entropy(qber.clamp(0.0, 1.0));
                (key_length as f64 * frac).floor().max(0.0) as usize
            }
            LengthRule::KeepAll => key_length,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Basis::{X, Z};

    #[test]
    fn sift_by_hand() {
        let s = sift(&[Z, X, Z, X], &[Z, Z, Z, X], &[1, 0, 1, 1], &[1, 1, 0, 1]).unwrap();
        assert_eq!(s.retained_indices, [0, 2, 3]);
        assert_eq!(s.alice, [1, 1, 1]);
        assert_eq!(s.bob, [1, 0, 1]);
        assert!(sift(&[Z, X], &[X, Z], &[0, 0], &[0, 0])
            .unwrap()
            .alice
            .is_empty());
        assert_eq!(
            sift(&[X, X], &[X, X], &[0, 1], &[0, 1])
                .unwrap()
                .retained_indices,
            [0, 1]
        );
        assert!(sift(&[Z], &[Z, Z], &[0], &[0]).is_err());
    }

    #[test]
    fn qber_by_hand() {
        let a = [0u8; 12];
        let mut b = [0u8; 12];
        b[1] = 1;
        b[5] = 1;
        b[9] = 1;
        let idx: Vec<usize> = (0..12).collect();
        let est = estimate_qber(&a, &b, &idx).unwrap();
        assert_eq!(est.qber, 0.25);
        assert!(est.remaining_alice.is_empty());

        let est = estimate_qber(&[1, 0, 1, 1], &[0, 1, 0, 0], &[0, 3]).unwrap();
        assert_eq!(est.qber, 1.0);
        assert_eq!(est.remaining_alice, [0, 1]);
        assert_eq!(est.remaining_bob, [1, 0]);

        assert_eq!(estimate_qber(&[1, 1], &[1, 1], &[1]).unwrap().qber, 0.0);
        assert!(estimate_qber(&[1, 1], &[1, 1], &[2]).is_err());
        assert!(estimate_qber(&[1, 1], &[1, 1], &[]).is_err());
    }

    #[test]
    fn reconcile_identical_keys_halves() {
        let mut rng = SimRng::seed_from_u64(1);
        let key: Vec<u8> = (0..100).map(|i| (i % 3 == 0) as u8).collect();
        let r = reconcile_parity(&key, &key, 1, &mut rng).unwrap();
        assert_eq!(r.corrected_alice.len(), 50);
        assert_eq!(r.residual_mismatch, 0);
        assert_eq!(r.bits_disclosed, 50);
    }

    #[test]
    fn reconcile_discards_detected_pair() {
        let mut rng = SimRng::seed_from_u64(2);
        let r = reconcile_parity(&[0, 1], &[0, 0], 1, &mut rng).unwrap();
        assert!(r.corrected_alice.is_empty());
        assert_eq!(r.residual_mismatch, 0);
    }

    #[test]
    fn reconcile_ten_percent_errors() {
        let mut worst = 0.0f64;
        for seed in 0..100 {
            let mut rng = SimRng::seed_from_u64(seed);
            let alice: Vec<u8> = (0..4096).map(|_| rng.coin() as u8).collect();
            let bob: Vec<u8> = alice.iter().map(|&b| b ^ rng.gen_bool(0.1) as u8).collect();
            let r = reconcile_parity(&alice, &bob, 4, &mut rng).unwrap();
            worst = worst.max(r.residual_mismatch as f64 / r.corrected_alice.len() as f64);
        }
        assert!(worst < 0.01, "{worst}");
    }

    #[test]
    fn identity_hash_keeps_key() {
        let key = [1, 0, 0, 1, 1, 1, 0];
        assert_eq!(Gf2Matrix::identity(7).apply(&key).unwrap(), key);
        let big: Vec<u8> = (0..130).map(|i| (i % 7 == 1) as u8).collect();
        assert_eq!(Gf2Matrix::identity(130).apply(&big).unwrap(), big);
    }

    #[test]
    fn hash_matches_naive_product() {
        let mut rng = SimRng::seed_from_u64(3);
        let key: Vec<u8> = (0..150).map(|_| rng.coin() as u8).collect();
        let m = Gf2Matrix::random(40, 150, &mut rng);
        let out = m.apply(&key).unwrap();
        for (r, bit) in out.iter().enumerate() {
            let naive: u32 = (0..150).map(|c| u32::from(m.get(r, c) & key[c])).sum();
            assert_eq!(u32::from(*bit), naive % 2);
        }
    }

    #[test]
    fn equal_keys_equal_outputs() {
        let key: Vec<u8> = (0..77).map(|i| (i % 2) as u8).collect();
        let a = privacy_amplify(&key, 30, &mut SimRng::seed_from_u64(9)).unwrap();
        let b = privacy_amplify(&key, 30, &mut SimRng::seed_from_u64(9)).unwrap();
        assert_eq!(a, b);
        assert!(privacy_amplify(&key, 78, &mut SimRng::seed_from_u64(9)).is_err());
    }

    #[test]
    fn hash_output_is_balanced() {
        let key: Vec<u8> = (0..64).map(|i| (i == 5 || i == 40) as u8).collect();
        let mut ones = [0usize; 8];
        for seed in 0..1000 {
            let out = privacy_amplify(&key, 8, &mut SimRng::seed_from_u64(seed)).unwrap();
            for (o, b) in ones.iter_mut().zip(out) {
                *o += b as usize;
            }
        }
        for o in ones {
            assert!((o as f64 / 1000.0 - 0.5).abs() < 0.05, "{o}");
        }
    }

    #[test]
    fn length_rule() {
        assert_eq!(LengthRule::BinaryEntropy.output_length(1000, 0.0), 1000);
        assert_eq!(LengthRule::BinaryEntropy.output_length(1000, 0.11), 0);
        assert_eq!(LengthRule::BinaryEntropy.output_length(1000, 0.3), 0);
        // h2(0.05) = 0.28640; 1 - 2h = 0.42720.
        assert_eq!(LengthRule::BinaryEntropy.output_length(1000, 0.05), 427);
        assert_eq!(LengthRule::KeepAll.output_length(33, 0.4), 33);
    }
}
