use qinfo::qkd::{bb84_run, AdversaryModel, Basis, Bb84Config, Verdict};

#[test]
fn intercept_resend_aborts_below_twenty_percent() {
    for seed in 0..10 {
        let mut cfg =
            Bb84Config::new(20_000, seed).with_adversary(AdversaryModel::InterceptResendZx);
        cfg.qber_abort_threshold = 0.19;
        assert!(!bb84_run(&cfg).unwrap().verdict.is_completed());
    }
}

#[test]
fn eve_uses_the_wrong_basis_half_the_time() {
    let s = bb84_run(&Bb84Config::new(50_000, 3).with_adversary(AdversaryModel::InterceptResendZx))
        .unwrap();
    let eve = s.eve.unwrap();
    let wrong = (0..50_000)
        .filter(|&i| eve.bases[i] != s.alice_bases[i])
        .count() as f64
        / 50_000.0;
    assert!((wrong - 0.5).abs() < 0.01, "{wrong}");
}

#[test]
fn sessions_are_reproducible() {
    let cfg =
        Bb84Config::new(5_000, 21).with_adversary(AdversaryModel::DepolarizingNoise { p: 0.1 });
    let a = bb84_run(&cfg).unwrap();
    let b = bb84_run(&cfg).unwrap();
    assert_eq!(a.bob_bits, b.bob_bits);
    assert_eq!(a.transcript.to_json_lines(), b.transcript.to_json_lines());
    assert_eq!(
        serde_json::to_string(&a.report()).unwrap(),
        serde_json::to_string(&b.report()).unwrap()
    );
}

#[test]
fn fixed_basis_attack_in_x() {
    let cfg = Bb84Config::new(40_000, 8)
        .with_adversary(AdversaryModel::InterceptResendFixed { basis: Basis::X });
    let s = bb84_run(&cfg).unwrap();
    let z_rounds: Vec<usize> = s
        .retained_indices
        .iter()
        .copied()
        .filter(|&i| s.alice_bases[i] == Basis::Z)
        .collect();
    let z_errors = z_rounds
        .iter()
        .filter(|&&i| s.alice_bits[i] != s.bob_bits[i])
        .count() as f64;
    assert!((z_errors / z_rounds.len() as f64 - 0.5).abs() < 0.03);
}

#[test]
fn report_has_expected_fields() {
    let s = bb84_run(&Bb84Config::new(2_000, 4)).unwrap();
    let v = serde_json::to_value(s.report()).unwrap();
    for key in [
        "config",
        "qber",
        "sift_fraction",
        "verdict",
        "key_length_raw",
        "key_length_final",
        "adversary_agreement",
    ] {
        assert!(v.get(key).is_some(), "{key}");
    }
    assert_eq!(v["verdict"], "completed");
    assert!(matches!(s.verdict, Verdict::Completed { .. }));
}
