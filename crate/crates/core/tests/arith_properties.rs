use proptest::prelude::*;

use quadlie::factor::factor_poly;
use quadlie::field::{Elem, Field};
use quadlie::linalg::{kernel, minimal_polynomial};
use quadlie::matrix::Matrix;
use quadlie::poly::Poly;
use quadlie::random;

fn field_strategy() -> impl Strategy<Value = Field> {
    prop_oneof![Just(Field::Rational), Just(Field::Prime(3)), Just(Field::Prime(5)), Just(Field::Prime(7)), Just(Field::Prime(101))]
}

fn elem(f: Field, n: i64, d: i64) -> Elem {
    match f {
        Field::Rational => f.from_ratio(n, d),
        Field::Prime(_) => f.from_i64(n),
    }
}

fn poly_from(f: Field, cs: &[i64]) -> Poly {
    Poly::new(f, cs.iter().map(|&c| f.from_i64(c)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn field_operations_invert(f in field_strategy(), a in -50i64..50, b in -50i64..50, d in 1i64..9) {
        let x = elem(f, a, d);
        let y = elem(f, b, 1);
        prop_assert_eq!(&(&x + &y) - &y, x.clone());
        if !y.is_zero() {
            prop_assert_eq!(&(&x * &y) / &y, x.clone());
            prop_assert!((&y * &y.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn square_classes_ignore_squares(f in field_strategy(), c in 1i64..200, d in 1i64..50, neg in any::<bool>()) {
        let c = f.from_i64(if neg { -c } else { c });
        let d = f.from_i64(d);
        prop_assume!(!c.is_zero() && !d.is_zero());
        prop_assert_eq!((&c * &(&d * &d)).square_class().unwrap(), c.square_class().unwrap());
        let s = c.sqrt();
        prop_assert_eq!(s.is_some(), c.is_square());
        if let Some(s) = s {
            prop_assert_eq!(&s * &s, c);
        }
    }

    #[test]
    fn division_with_remainder(f in field_strategy(), a in prop::collection::vec(-9i64..9, 1..8), b in prop::collection::vec(-9i64..9, 1..5)) {
        let pa = poly_from(f, &a);
        let pb = poly_from(f, &b);
        prop_assume!(!pb.is_zero());
        let (q, r) = pa.divrem(&pb).unwrap();
        prop_assert_eq!(&(&q * &pb) + &r, pa);
        prop_assert!(r.is_zero() || r.deg() < pb.deg());
    }

    #[test]
    fn bezout_identity(f in field_strategy(), a in prop::collection::vec(-9i64..9, 1..7), b in prop::collection::vec(-9i64..9, 1..7)) {
        let pa = poly_from(f, &a);
        let pb = poly_from(f, &b);
        prop_assume!(!pa.is_zero() || !pb.is_zero());
        let (g, u, v) = Poly::ext_gcd(&pa, &pb).unwrap();
        prop_assert_eq!(&(&u * &pa) + &(&v * &pb), g.clone());
        prop_assert!(g.divides(&pa) && g.divides(&pb));
    }

    #[test]
    fn factorizations_multiply_back(f in field_strategy(), a in prop::collection::vec(-6i64..6, 2..8)) {
        let p = poly_from(f, &a);
        prop_assume!(p.deg() >= 1);
        let factors = factor_poly(&p).unwrap();
        let mut prod = Poly::constant(p.leading());
        for (q, e) in &factors {
            prop_assert!(q.is_monic());
            prod = &prod * &q.pow(*e);
        }
        prop_assert_eq!(prod, p);
    }

    #[test]
    fn determinant_is_multiplicative(f in field_strategy(), seed in any::<u64>(), n in 1usize..5) {
        let mut rng = random::rng(seed);
        let a = random::random_matrix(f, n, n, &mut rng);
        let b = random::random_matrix(f, n, n, &mut rng);
        prop_assert_eq!((&a * &b).det(), &a.det() * &b.det());
        prop_assert_eq!(a.rank() + kernel(&a).dim(), n);
        if let Some(inv) = a.inverse() {
            prop_assert!((&a * &inv).is_identity());
        } else {
            prop_assert!(a.det().is_zero());
        }
    }

    #[test]
    fn minimal_polynomial_is_a_similarity_invariant(f in field_strategy(), seed in any::<u64>(), n in 1usize..6) {
        let mut rng = random::rng(seed);
        let a = random::random_matrix(f, n, n, &mut rng);
        let p = random::random_invertible(f, n, &mut rng);
        let m = minimal_polynomial(&a).unwrap();
        prop_assert!(m.eval_matrix(&a).is_zero());
        prop_assert_eq!(minimal_polynomial(&a.similar(&p)).unwrap(), m);
    }
}

#[test]
fn rational_field_rejects_garbage() {
    assert!(Field::Rational.parse_elem("1/0").is_err());
    assert!("Fp:4".parse::<Field>().is_err());
    assert_eq!("F7".parse::<Field>().unwrap(), Field::Prime(7));
    let m = Matrix::identity(Field::Prime(3), 2);
    assert!(m.is_identity());
}
