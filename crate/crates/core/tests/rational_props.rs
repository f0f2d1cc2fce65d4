use asfield_core::{enumerate_places, make_as_generator, Place, RationalFunction, Valuation};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

mod common;

/// Places where x has a zero or pole, plus infinity.
fn support(x: &RationalFunction) -> Vec<Place> {
    let mut places = vec![Place::infinity(x.field())];
    for g in [x.numerator(), x.denominator()] {
        if g.degree().unwrap_or(0) > 0 {
            places.extend(g.factor().unwrap().factors.into_iter().map(|(a, _)| Place::Finite(a)));
        }
    }
    places
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn degree_weighted_product_formula(seed in any::<u64>(), k in 0usize..5) {
        let f = &common::small_fields()[k];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = common::nonzero_rational(f, 6, &mut rng);
        let total: i64 = support(&x)
            .iter()
            .map(|v| v.degree() as i64 * v.valuation(&x).finite().unwrap())
            .sum();
        prop_assert_eq!(total, 0);
    }

    #[test]
    fn reduction_is_canonical(seed in any::<u64>(), k in 0usize..5) {
        let f = &common::small_fields()[k];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let num = common::poly(f, 5, &mut rng);
        let den = common::nonzero_poly(f, 5, &mut rng);
        let h = common::nonzero_poly(f, 3, &mut rng);
        let c = common::nonzero_element(f, &mut rng);
        let a = RationalFunction::new(num.clone(), den.clone()).unwrap();
        let b = RationalFunction::new((&num * &h).scale(&c), (&den * &h).scale(&c)).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert!(a.denominator().is_monic());
        prop_assert!(a.numerator().gcd(a.denominator()).is_one());
    }

    #[test]
    fn partial_fractions_recombine(seed in any::<u64>(), k in 0usize..5) {
        let f = &common::small_fields()[k];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = common::rational(f, 6, &mut rng);
        let pf = x.partial_fractions();
        prop_assert_eq!(pf.recombine(), x);
        for (place, digits) in &pf.principal_parts {
            let d = place.degree() as i64;
            prop_assert!(digits.iter().all(|h| h.deg() < d));
        }
    }
}

#[test]
fn generator_pole_profile() {
    for f in common::small_fields().into_iter().take(4) {
        let p = f.characteristic();
        let places = enumerate_places(&f, 3, true);
        for a in &places {
            for i in (1..=7).filter(|i| i % p != 0) {
                let c = make_as_generator(a, i, false).unwrap().value;
                for b in &places {
                    let v = b.valuation(&c);
                    if b == a {
                        assert_eq!(v, Valuation::Finite(-(i as i64)), "a={a} i={i}");
                    } else {
                        assert!(v >= Valuation::Finite(0), "a={a} b={b} i={i}");
                    }
                }
            }
        }
    }
}

#[test]
fn strict_generators_reject_p_divisible_exponents() {
    let f = asfield_core::FiniteField::prime(3).unwrap();
    let t = Place::finite(asfield_core::Polynomial::x(&f)).unwrap();
    assert!(make_as_generator(&t, 3, false).is_err());
    assert!(make_as_generator(&t, 3, true).is_ok());
}
