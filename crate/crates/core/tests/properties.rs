use proptest::prelude::*;

use qinfo::infotheory::{
    entanglement_entropy, holevo_chi, is_entangled_pure, ppt_check, ppt_class, schmidt_decompose,
    shannon_entropy, von_neumann_entropy, Cut, Ensemble, PptClass,
};
use qinfo::linalg::{hermitian_eig, partial_trace, svd, ComplexMatrix};
use qinfo::qstate::{computational_basis_state, purify, DensityOperator, PureState};
use qinfo::random::{haar_state, haar_unitary, random_density, random_distribution};
use qinfo::rng::SimRng;

fn random_matrix(rows: usize, cols: usize, rng: &mut SimRng) -> ComplexMatrix {
    let data = (0..rows * cols)
        .map(|_| qinfo::linalg::c(rng.next_gaussian(), rng.next_gaussian()))
        .collect();
    ComplexMatrix::new(rows, cols, data).unwrap()
}

fn random_hermitian(n: usize, rng: &mut SimRng) -> ComplexMatrix {
    let a = random_matrix(n, n, rng);
    (&a + &a.dagger()).scale_real(0.5)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn eigenvalues_sum_to_trace_and_reconstruct(seed in any::<u64>(), n in 1usize..=16) {
        let mut rng = SimRng::seed_from_u64(seed);
        let h = random_hermitian(n, &mut rng);
        let e = hermitian_eig(&h).unwrap();
        let sum: f64 = e.values.iter().sum();
        prop_assert!((sum - h.trace().re).abs() < 1e-9 * (1.0 + h.frobenius_norm()));
        prop_assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
        prop_assert!(e.reconstruct().max_abs_diff(&h) < 1e-9 * (1.0 + h.frobenius_norm()));
        prop_assert!(e.vectors.is_unitary(1e-9));
    }

    #[test]
    fn svd_reconstructs(seed in any::<u64>(), rows in 1usize..=16, cols in 1usize..=16) {
        let mut rng = SimRng::seed_from_u64(seed);
        let m = random_matrix(rows, cols, &mut rng);
        let d = svd(&m);
        prop_assert!(d.values.iter().all(|&s| s >= 0.0));
        prop_assert!(d.values.windows(2).all(|w| w[0] >= w[1] - 1e-12));
        prop_assert!(d.reconstruct().max_abs_diff(&m) < 1e-9 * (1.0 + m.frobenius_norm()));
    }

    #[test]
    fn partial_trace_keeps_trace_and_positivity(seed in any::<u64>(), n in 2usize..=4, keep_mask in 1u32..15) {
        let mut rng = SimRng::seed_from_u64(seed);
        let rho = random_density(n, &mut rng);
        let keep: Vec<usize> = (0..n).filter(|q| keep_mask >> q & 1 == 1).collect();
        prop_assume!(!keep.is_empty());
        let dims = vec![2; n];
        let reduced = partial_trace(rho.matrix(), &dims, &keep).unwrap();
        prop_assert!((reduced.trace().re - 1.0).abs() < 1e-10);
        prop_assert!(reduced.is_hermitian(1e-10));
        prop_assert!(hermitian_eig(&reduced).unwrap().min_value() > -1e-9);
    }

    #[test]
    fn gates_preserve_norm(seed in any::<u64>(), n in 1usize..=5) {
        let mut rng = SimRng::seed_from_u64(seed);
        let mut s = haar_state(n, &mut rng);
        for _ in 0..5 {
            let k = 1 + rng.gen_below(n.min(2) as u64) as usize;
            let targets = rng.sample_indices(n, k);
            let u = haar_unitary(1 << k, &mut rng);
            s = s.apply_gate(&u, &targets).unwrap();
        }
        let norm: f64 = s.amplitudes().iter().map(|z| z.norm_sqr()).sum();
        prop_assert!((norm - 1.0).abs() < 1e-10);
    }

    #[test]
    fn born_probabilities_sum_to_one(seed in any::<u64>(), n in 1usize..=5) {
        let mut rng = SimRng::seed_from_u64(seed);
        let s = haar_state(n, &mut rng);
        let k = 1 + rng.gen_below(n as u64) as usize;
        let mut targets = rng.sample_indices(n, k);
        rng.shuffle(&mut targets);
        let total: f64 = s.outcome_probabilities(&targets).unwrap().iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-10);
    }

    #[test]
    fn purification_round_trip(seed in any::<u64>(), n in 1usize..=3) {
        let mut rng = SimRng::seed_from_u64(seed);
        let rho = random_density(n, &mut rng);
        let psi = purify(&rho);
        let keep: Vec<usize> = (0..n).collect();
        let back = psi.reduced_density(&keep).unwrap();
        prop_assert!(back.matrix().max_abs_diff(rho.matrix()) < 1e-9);
    }

    #[test]
    fn shannon_bounded_by_log(seed in any::<u64>(), n in 1usize..=32) {
        let mut rng = SimRng::seed_from_u64(seed);
        let p = random_distribution(n, &mut rng);
        let h = shannon_entropy(&p).unwrap();
        prop_assert!(h >= 0.0 && h <= (n as f64).log2() + 1e-12);
    }

    #[test]
    fn von_neumann_unitarily_invariant(seed in any::<u64>(), n in 1usize..=3) {
        let mut rng = SimRng::seed_from_u64(seed);
        let rho = random_density(n, &mut rng);
        let u = haar_unitary(1 << n, &mut rng);
        let s0 = von_neumann_entropy(&rho).unwrap();
        let s1 = von_neumann_entropy(&rho.conjugate(&u).unwrap()).unwrap();
        prop_assert!((s0 - s1).abs() < 1e-9);
        prop_assert!(s0 >= -1e-12 && s0 <= n as f64 + 1e-9);
    }

    #[test]
    fn entanglement_entropy_symmetric_in_cut(seed in any::<u64>(), n in 2usize..=5, k_raw in 1usize..5) {
        let mut rng = SimRng::seed_from_u64(seed);
        let k = 1 + (k_raw - 1) % (n - 1);
        let s = haar_state(n, &mut rng);
        let a: Vec<usize> = rng.sample_indices(n, k);
        let b: Vec<usize> = (0..n).filter(|q| !a.contains(q)).collect();
        let ea = entanglement_entropy(&s, &Cut::new(n, &a).unwrap()).unwrap();
        let eb = entanglement_entropy(&s, &Cut::new(n, &b).unwrap()).unwrap();
        prop_assert!((ea - eb).abs() < 1e-9);
    }

    #[test]
    fn schmidt_rank_equals_reduced_rank(seed in any::<u64>(), product in any::<bool>()) {
        let mut rng = SimRng::seed_from_u64(seed);
        let s = if product {
            haar_state(1, &mut rng).tensor(&haar_state(2, &mut rng))
        } else {
            haar_state(3, &mut rng)
        };
        let cut = Cut::new(3, &[0]).unwrap();
        let d = schmidt_decompose(&s, &cut).unwrap();
        let reduced = s.reduced_density(&[0]).unwrap();
        let rank = reduced.eigen().values.iter().filter(|&&v| v > 1e-9).count();
        prop_assert_eq!(d.rank(), rank);
        prop_assert!(d.reconstruct().fidelity(&s).unwrap() > 1.0 - 1e-9);
        prop_assert_eq!(is_entangled_pure(&s, &cut).unwrap(), !product);
    }

    #[test]
    fn orthogonal_ensemble_chi_is_shannon(seed in any::<u64>(), n in 1usize..=3) {
        let mut rng = SimRng::seed_from_u64(seed);
        let dim = 1 << n;
        let p = random_distribution(dim, &mut rng);
        let states: Vec<PureState> = (0..dim).map(|i| computational_basis_state(n, i).unwrap()).collect();
        let ens = Ensemble::from_pure(p.clone(), &states).unwrap();
        prop_assert!((holevo_chi(&ens).unwrap() - shannon_entropy(&p).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn separable_mixtures_are_ppt(seed in any::<u64>(), terms in 1usize..6) {
        let mut rng = SimRng::seed_from_u64(seed);
        let weights = random_distribution(terms, &mut rng);
        let products: Vec<DensityOperator> = (0..terms)
            .map(|_| random_density(1, &mut rng).tensor(&random_density(1, &mut rng)))
            .collect();
        let parts: Vec<(f64, &DensityOperator)> = weights.iter().copied().zip(&products).collect();
        let rho = DensityOperator::mixture(&parts).unwrap();
        prop_assert!(ppt_check(&rho).unwrap().is_separable);
        let (class, _) = ppt_class(&rho, &Cut::new(2, &[0]).unwrap()).unwrap();
        prop_assert_eq!(class, PptClass::Ppt);
    }

    #[test]
    fn ppt_agrees_with_schmidt_on_pure_states(seed in any::<u64>(), product in any::<bool>()) {
        let mut rng = SimRng::seed_from_u64(seed);
        let s = if product {
            haar_state(1, &mut rng).tensor(&haar_state(1, &mut rng))
        } else {
            haar_state(2, &mut rng)
        };
        let entangled = is_entangled_pure(&s, &Cut::new(2, &[0]).unwrap()).unwrap();
        prop_assert_eq!(ppt_check(&s.to_density()).unwrap().is_separable, !entangled);
    }
}
