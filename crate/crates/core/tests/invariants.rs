//! Property tests on random sparse states and random operator words.

use num_complex::Complex64;
use proptest::prelude::*;

use ternary_fock::exciton::ops::{exciton_annihilate, exciton_create, ExcitonIndex};
use ternary_fock::fockspace::{Chain, ChainState, FockBasisState, Ladder, LinearOp, QutritLabel, Species};
use ternary_fock::moment::expect::TruncatedMode;
use ternary_fock::moment::word::{normal_order, Letter, OpPolynomial, OpWord};

fn sparse_state(sites: usize) -> impl Strategy<Value = ChainState> {
    let dim = 1u64 << (2 * sites);
    prop::collection::vec((0..dim, -1.0f64..1.0, -1.0f64..1.0), 1..12).prop_map(move |terms| {
        let mut s = ChainState::zero(sites);
        for (bits, re, im) in terms {
            s.add_amp(FockBasisState(bits), Complex64::new(re, im));
        }
        s
    })
}

fn chain_and_state() -> impl Strategy<Value = (usize, ChainState)> {
    (2usize..=8).prop_flat_map(|l| (Just(l), sparse_state(l)))
}

fn species(b: bool) -> Species {
    if b {
        Species::C
    } else {
        Species::D
    }
}

fn qutrit_product(sites: usize) -> impl Strategy<Value = ChainState> {
    prop::collection::vec(prop::sample::select(QutritLabel::TERNARY.to_vec()), sites)
        .prop_map(|labels| ChainState::product(&labels))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn canonical_anticommutators((l, psi) in chain_and_state(), i in 1usize..=8, j in 1usize..=8, si: bool, sj: bool) {
        let chain = Chain::new(l).unwrap();
        let (i, j) = (1 + (i - 1) % l, 1 + (j - 1) % l);
        let a = chain.mode_op(Ladder::Annihilate, species(si), i).unwrap();
        let ad = chain.mode_op(Ladder::Create, species(sj), j).unwrap();
        let ac = LinearOp::anticommutator(&a, &ad).apply(&psi);
        let expect = if (i, si) == (j, sj) { psi.clone() } else { ChainState::zero(l) };
        prop_assert!(ac.distance(&expect) < 1e-12);
        let b = chain.mode_op(Ladder::Annihilate, species(sj), j).unwrap();
        prop_assert!(LinearOp::anticommutator(&a, &b).apply(&psi).norm() < 1e-12);
    }

    #[test]
    fn adjoint_is_hermitian_conjugate((l, psi) in chain_and_state(), phi_seed in 0u64..1 << 16, i in 1usize..=8, j in 1usize..=8) {
        let chain = Chain::new(l).unwrap();
        let (i, j) = (1 + (i - 1) % l, 1 + (j - 1) % l);
        let op = chain.mode_op(Ladder::Create, Species::C, i).unwrap()
            * chain.mode_op(Ladder::Annihilate, Species::D, j).unwrap()
            * Complex64::new(0.3, -0.7)
            + chain.mode_op(Ladder::Create, Species::D, j).unwrap();
        let mut phi = ChainState::zero(l);
        for (k, (b, a)) in psi.iter().enumerate() {
            let flipped = FockBasisState(b.0 ^ (phi_seed.rotate_left(k as u32) & ((1 << (2 * l)) - 1)));
            phi.add_amp(flipped, a.conj());
            phi.add_amp(b, Complex64::new(0.5, k as f64));
        }
        let lhs = phi.inner(&op.apply(&psi));
        let rhs = op.adjoint().apply(&phi).inner(&psi);
        prop_assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn exciton_pairs_are_hard_core(psi in qutrit_product(6), e in 2usize..=6, h in 1usize..=5) {
        prop_assume!(e > h);
        let chain = Chain::new(6).unwrap();
        let idx = ExcitonIndex::new(chain, e, h).unwrap();
        let a_dag = exciton_create(chain, idx).unwrap();
        let a = exciton_annihilate(chain, idx).unwrap();
        prop_assert!(a_dag.apply(&a_dag.apply(&psi)).norm() < 1e-12);
        prop_assert!(a.apply(&a.apply(&psi)).norm() < 1e-12);
        // a a† a† a on a product state returns it or kills it
        let round = a.apply(&a_dag.apply(&psi));
        prop_assert!(round.distance(&psi) < 1e-12 || round.norm() < 1e-12);
    }

    #[test]
    fn normal_ordering_preserves_truncated_moments(
        letters in prop::collection::vec(any::<bool>(), 1..6),
        r in 0.0f64..1.2,
        phase in 0.0f64..std::f64::consts::TAU,
    ) {
        let word = OpWord(letters.iter().map(|&d| if d { Letter::create(1) } else { Letter::annihilate(1) }).collect());
        let p = OpPolynomial::word(word);
        let ordered = normal_order(&p);
        prop_assert_eq!(normal_order(&ordered.clone()), ordered.clone());
        let backend = TruncatedMode { ceiling: 40 };
        let lambda = Complex64::from_polar(r, phase);
        prop_assert!((backend.expect(&p, lambda) - backend.expect(&ordered, lambda)).norm() < 1e-9);
    }
}
