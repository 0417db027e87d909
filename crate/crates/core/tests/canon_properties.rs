use proptest::prelude::*;

use quadlie::field::Field;
use quadlie::quadspace::{witt_index_finite, OrthogonalSpace, SkewEndo};
use quadlie::random::{self, AssemblyKind};
use quadlie::skewcanon::{canonical_pair, spectral_form};

fn field_strategy() -> impl Strategy<Value = Field> {
    prop_oneof![Just(Field::Rational), Just(Field::Prime(3)), Just(Field::Prime(5)), Just(Field::Prime(7))]
}

fn prime_strategy() -> impl Strategy<Value = Field> {
    prop_oneof![Just(Field::Prime(3)), Just(Field::Prime(5)), Just(Field::Prime(7)), Just(Field::Prime(11))]
}

fn random_skew_endo(f: Field, n: usize, seed: u64) -> SkewEndo {
    let mut rng = random::rng(seed);
    let gram = random::random_regular_gram(f, n, &mut rng);
    let a = random::random_skew(&gram, &mut rng);
    SkewEndo::new(OrthogonalSpace::new(gram).unwrap(), a).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn odd_powers_stay_skew(f in field_strategy(), n in 1usize..6, seed in any::<u64>()) {
        let s = random_skew_endo(f, n, seed);
        for k in [1, 3, 5] {
            prop_assert!(s.space().is_skew(&s.matrix().pow(k)).unwrap());
        }
    }

    #[test]
    fn canonical_pairs_certify_themselves(f in field_strategy(), n in 1usize..6, seed in any::<u64>()) {
        let s = random_skew_endo(f, n, seed);
        let cp = canonical_pair(&s).unwrap();
        prop_assert!(cp.verify(&s));
        let dims: usize = cp.blocks.iter().map(|b| b.size()).sum::<usize>()
            + cp.residual.iter().map(|r| r.dim).sum::<usize>();
        prop_assert_eq!(dims, n);
    }

    #[test]
    fn keys_survive_change_of_basis(f in field_strategy(), n in 1usize..5, seed in any::<u64>()) {
        let s = random_skew_endo(f, n, seed);
        let mut rng = random::rng(seed ^ 0x5eed);
        let p = random::random_invertible(f, n, &mut rng);
        let moved = s.change_basis(&p).unwrap();
        let k1 = canonical_pair(&s).unwrap().key().unwrap();
        let k2 = canonical_pair(&moved).unwrap().key().unwrap();
        prop_assert_eq!(k1, k2);
    }

    #[test]
    fn assemblies_are_recognized(f in field_strategy(), nilpotent in any::<bool>(), seed in any::<u64>()) {
        let kind = if nilpotent { AssemblyKind::Nilpotent } else { AssemblyKind::SplitEigenvalue };
        let mut rng = random::rng(seed);
        let asm = random::random_assembly(f, 6, kind, &mut rng).unwrap();
        let plain = canonical_pair(&asm.original).unwrap();
        let scrambled = canonical_pair(&asm.scrambled).unwrap();
        prop_assert!(scrambled.verify(&asm.scrambled));
        prop_assert!(scrambled.is_complete());
        prop_assert_eq!(plain.key().unwrap(), scrambled.key().unwrap());
    }

    #[test]
    fn witt_index_matches_search(f in prime_strategy(), n in 1usize..6, seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let gram = random::random_regular_gram(f, n, &mut rng);
        let disc = gram.det();
        let report = OrthogonalSpace::new(gram).unwrap().isotropy_report().unwrap();
        prop_assert_eq!(report.witt_index, Some(witt_index_finite(n, &disc)));
    }

    #[test]
    fn spectral_form_on_definite_space(n in 1usize..4, seed in any::<u64>()) {
        let f = Field::Rational;
        let mut rng = random::rng(seed);
        let space = OrthogonalSpace::standard(f, 2 * n);
        let a = random::random_skew(space.gram(), &mut rng);
        let s = SkewEndo::new(space, a).unwrap();
        let sf = spectral_form(&s).unwrap();
        let moved_a = s.matrix().similar(&sf.basis_change);
        let moved_b = s.gram().congruent(&sf.basis_change);
        let dims: usize = sf.zero_dim + 2 * sf.mus.len() + sf.residual.iter().map(|(_, d)| d).sum::<usize>();
        prop_assert_eq!(dims, 2 * n);
        prop_assert_eq!(moved_a, sf.a);
        prop_assert_eq!(moved_b, sf.b);
        for mu in &sf.mus {
            prop_assert_eq!(mu.sign(), Some(std::cmp::Ordering::Greater));
        }
    }
}
