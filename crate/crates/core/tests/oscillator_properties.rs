use proptest::prelude::*;

use quadlie::field::{Elem, Field};
use quadlie::liecore::{dq_lower_bound_check, invariance_violation};
use quadlie::oscillator::{
    build_double_extension, classify_nilpotent, decide_isometric, is_homomorphism, local_criteria, lorentz_data, lorentz_key,
    phi_ts_isometry, recover_double_extension, verify_iso_witness, verify_structure, witness_from_map, IsoDecision,
    IsoVerdict, OscillatorData, TsIsometry,
};
use quadlie::random::{self, AssemblyKind};

fn field_strategy() -> impl Strategy<Value = Field> {
    prop_oneof![Just(Field::Rational), Just(Field::Prime(3)), Just(Field::Prime(5)), Just(Field::Prime(7))]
}

fn data(f: Field, n: usize, seed: u64) -> OscillatorData {
    random::random_oscillator(f, n, &mut random::rng(seed))
}

/// Same data moved by a random isometry of `(V, phi)`.
fn isometric_copy(d: &OscillatorData, seed: u64) -> OscillatorData {
    let mut rng = random::rng(seed);
    let g = random::random_isometry(d.space(), 3, &mut rng);
    OscillatorData::new(d.gram().clone(), d.delta().similar(&g)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn extensions_are_quadratic(f in field_strategy(), n in 1usize..6, seed in any::<u64>()) {
        let d = data(f, n, seed);
        let q = build_double_extension(&d).unwrap();
        prop_assert_eq!(q.dim(), n + 2);
        prop_assert!(q.algebra.jacobi_check().is_none());
        prop_assert!(invariance_violation(&q.algebra, q.form.gram()).is_none());
        prop_assert!(q.form.is_regular());
    }

    #[test]
    fn structure_matches_closed_forms(f in field_strategy(), n in 1usize..6, seed in any::<u64>()) {
        let d = data(f, n, seed);
        let r = verify_structure(&d).unwrap();
        prop_assert!(r.is_consistent(), "{:?}", r.mismatches);
        prop_assert!(r.quadratic_dimension >= 1);
    }

    #[test]
    fn tsou_walker_bound_on_nonabelian_extensions(f in field_strategy(), n in 1usize..5, seed in any::<u64>()) {
        let d = data(f, n, seed);
        prop_assume!(!d.delta().is_zero());
        let q = build_double_extension(&d).unwrap();
        prop_assert!(dq_lower_bound_check(&q).unwrap().holds);
    }

    #[test]
    fn locality_criteria_agree(f in field_strategy(), n in 1usize..5, seed in any::<u64>()) {
        let d = data(f, n, seed);
        let r = local_criteria(&d).unwrap();
        prop_assert!(r.agree(), "{:?}", r.criteria());
    }

    #[test]
    fn extensions_round_trip(f in field_strategy(), n in 1usize..3, seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let Ok(d) = random::random_invertible_oscillator(f, 2 * n, &mut rng) else { return Ok(()) };
        let q = build_double_extension(&d).unwrap();
        let p = random::random_invertible(f, 2 * n + 2, &mut rng);
        let moved = q.change_basis(&p).unwrap();
        let rec = recover_double_extension(&moved).unwrap();
        let back = build_double_extension(&rec.data).unwrap();
        prop_assert_eq!(rec.data.dim(), 2 * n);
        prop_assert!(is_homomorphism(&back.algebra, &moved.algebra, &rec.iso));
        prop_assert_eq!(moved.form.gram().congruent(&rec.iso), back.form.gram().clone());
    }

    #[test]
    fn isometric_copies_are_never_separated(f in field_strategy(), n in 1usize..4, seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let d = match random::random_invertible_oscillator(f, 2 * n, &mut rng) {
            Ok(d) => d,
            Err(_) => return Ok(()),
        };
        let e = isometric_copy(&d, seed ^ 0xa5a5);
        match decide_isometric(&d, &e).unwrap() {
            IsoDecision::Yes(w) => {
                prop_assert!(!matches!(verify_iso_witness(&d, &e, &w).unwrap(), IsoVerdict::Invalid(_)));
            }
            IsoDecision::No { kind, detail } => prop_assert!(false, "separated by {kind}: {detail}"),
            IsoDecision::Undecided(_) => {}
        }
    }

    #[test]
    fn scaling_delta_gives_an_isometric_algebra(f in field_strategy(), n in 1usize..4, c in 1i64..6, seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let Ok(d) = random::random_invertible_oscillator(f, 2 * n, &mut rng) else { return Ok(()) };
        let c = f.from_i64(c);
        prop_assume!(!c.is_zero());
        let e = d.scaled(&c);
        let w = quadlie::oscillator::IsoWitness {
            f: quadlie::matrix::Matrix::identity(f, 2 * n),
            z: vec![f.zero(); 2 * n],
            lambda: c.clone(),
            mu: c.inv().unwrap(),
            nu: f.zero(),
        };
        prop_assert_eq!(verify_iso_witness(&d, &e, &w).unwrap(), IsoVerdict::IsometricIsomorphism);
        let separated = matches!(decide_isometric(&d, &e).unwrap(), IsoDecision::No { .. });
        prop_assert!(!separated);
    }

    #[test]
    fn witnesses_are_recovered_from_maps(f in field_strategy(), n in 1usize..4, seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let Ok(d) = random::random_invertible_oscillator(f, 2 * n, &mut rng) else { return Ok(()) };
        let e = isometric_copy(&d, seed.wrapping_add(1));
        if let IsoDecision::Yes(w) = decide_isometric(&d, &e).unwrap() {
            let map = quadlie::oscillator::witness_map(&d, &e, &w).unwrap();
            let again = witness_from_map(&d, &e, &map).unwrap();
            prop_assert!(!matches!(verify_iso_witness(&d, &e, &again).unwrap(), IsoVerdict::Invalid(_)));
        }
    }

    #[test]
    fn nilpotent_keys_are_isometry_invariant(f in field_strategy(), seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let asm = random::random_assembly(f, 6, AssemblyKind::Nilpotent, &mut rng).unwrap();
        let d = OscillatorData::from_skew(asm.original.clone()).unwrap();
        let e = isometric_copy(&d, seed ^ 0x77);
        let c1 = classify_nilpotent(&d).unwrap();
        let c2 = classify_nilpotent(&e).unwrap();
        prop_assert_eq!(&c1.key, &c2.key);
        prop_assert!(c1.sizes_admissible && c1.chain_bounds);
        prop_assert_eq!(c1.k, c2.k);
    }

    #[test]
    fn lorentz_keys_ignore_order_and_scale(len in 1usize..4, seed in any::<u64>(), c in 1i64..5) {
        let mut rng = random::rng(seed);
        let lam = random::random_frequencies(len, 9, &mut rng);
        let one = Field::Rational.one();
        let k1 = lorentz_key(&lam, &one).unwrap();
        let mut rev: Vec<Elem> = lam.iter().rev().map(|l| l * &Field::Rational.from_i64(c)).collect();
        rev.rotate_left(len / 2);
        let k2 = lorentz_key(&rev, &one).unwrap();
        prop_assert_eq!(k1.lam, k2.lam);
        prop_assert!(build_double_extension(&lorentz_data(&lam).unwrap()).is_ok());
    }

    #[test]
    fn ts_forms_with_square_ratio_are_isometric(f in field_strategy(), n in 1usize..4, t in -5i64..5, s in 1i64..5, r in 1i64..4, seed in any::<u64>()) {
        let d = data(f, n, seed);
        let (t, s) = (f.from_i64(t), f.from_i64(s));
        let r = f.from_i64(r);
        prop_assume!(!s.is_zero() && !r.is_zero());
        let s2 = &s * &(&r * &r);
        let t2 = f.from_i64(1);
        match phi_ts_isometry(&d, (&t, &s), (&t2, &s2)).unwrap() {
            TsIsometry::Witness { .. } => {}
            other => prop_assert!(false, "expected a witness, got {other:?}"),
        }
    }
}
