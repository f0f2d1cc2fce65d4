#![allow(dead_code)]

use asfield_core::{enumerate_places, FieldElement, FiniteField, Place, Polynomial, RationalFunction};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Small fields exercised by the randomized tests.
pub fn small_fields() -> Vec<FiniteField> {
    [(2, 1), (2, 2), (3, 1), (5, 1), (3, 2)]
        .into_iter()
        .map(|(p, m)| FiniteField::new(p, m).unwrap())
        .collect()
}

pub fn element(f: &FiniteField, rng: &mut ChaCha8Rng) -> FieldElement {
    f.element_at(rng.gen_range(0..f.order()))
}

pub fn nonzero_element(f: &FiniteField, rng: &mut ChaCha8Rng) -> FieldElement {
    f.element_at(rng.gen_range(1..f.order()))
}

/// Random polynomial of degree at most `max_deg`.
pub fn poly(f: &FiniteField, max_deg: usize, rng: &mut ChaCha8Rng) -> Polynomial {
    let n = rng.gen_range(0..=max_deg) + 1;
    Polynomial::new(f, (0..n).map(|_| element(f, rng)).collect())
}

pub fn nonzero_poly(f: &FiniteField, max_deg: usize, rng: &mut ChaCha8Rng) -> Polynomial {
    loop {
        let g = poly(f, max_deg, rng);
        if !g.is_zero() {
            return g;
        }
    }
}

pub fn rational(f: &FiniteField, max_deg: usize, rng: &mut ChaCha8Rng) -> RationalFunction {
    RationalFunction::new(poly(f, max_deg, rng), nonzero_poly(f, max_deg, rng)).unwrap()
}

pub fn nonzero_rational(f: &FiniteField, max_deg: usize, rng: &mut ChaCha8Rng) -> RationalFunction {
    RationalFunction::new(nonzero_poly(f, max_deg, rng), nonzero_poly(f, max_deg, rng)).unwrap()
}

pub fn place(f: &FiniteField, max_deg: usize, rng: &mut ChaCha8Rng) -> Place {
    let places = enumerate_places(f, max_deg, true);
    places[rng.gen_range(0..places.len())].clone()
}

/// Sum of `s_k / a^k` and a polynomial part: a function with prescribed poles.
pub fn with_poles(f: &FiniteField, poles: &[(&Place, usize)], rng: &mut ChaCha8Rng) -> RationalFunction {
    let mut acc = RationalFunction::zero(f);
    for (pl, order) in poles {
        for k in 1..=*order as i64 {
            let c = RationalFunction::constant(element(f, rng));
            let u = pl.uniformizer().powi(-k).unwrap();
            acc = &acc + &(&c * &u);
        }
    }
    &acc + &RationalFunction::constant(element(f, rng))
}
