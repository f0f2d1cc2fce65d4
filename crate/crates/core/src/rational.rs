//! The rational function field k = F_q(T), its places and valuations.

use std::cmp::Ordering;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::finite_field::{FieldElement, FiniteField};
use crate::poly::{enumerate_monic_irreducibles, Polynomial};

/// A reduced fraction `num/den` with `den` monic and `gcd(num, den) = 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let field = num.field().clone();
        if num.is_zero() {
            return Ok(Self::zero(&field));
        }
        let g = num.gcd(&den);
        let (num, den) = (num.exact_div(&g), den.exact_div(&g));
        let lc = den.leading_coeff().inverse()?;
        Ok(RationalFunction {
            num: num.scale(&lc),
            den: den.scale(&lc),
        })
    }

    pub fn from_poly(num: Polynomial) -> Self {
        let den = Polynomial::one(num.field());
        RationalFunction { num, den }
    }

    pub fn constant(c: FieldElement) -> Self {
        let field = c.field().clone();
        Self::from_poly(Polynomial::constant(&field, c))
    }

    pub fn zero(field: &FiniteField) -> Self {
        Self::from_poly(Polynomial::zero(field))
    }

    pub fn one(field: &FiniteField) -> Self {
        Self::from_poly(Polynomial::one(field))
    }

    /// The transcendental `T`.
    pub fn t(field: &FiniteField) -> Self {
        Self::from_poly(Polynomial::x(field))
    }

    pub fn field(&self) -> &FiniteField {
        self.num.field()
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.num
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, rhs: &Self) -> Result<Self> {
        Ok(self * &rhs.inverse()?)
    }

    /// Integer power; negative exponents invert.
    pub fn powi(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let k = e.unsigned_abs();
        Ok(RationalFunction {
            num: base.num.pow(k),
            den: base.den.pow(k),
        })
    }

    /// The Artin–Schreier operator `x^p - x`.
    pub fn wp(&self) -> Self {
        let p = self.field().characteristic() as i64;
        &self.powi(p).expect("nonnegative power") - self
    }

    pub fn scale(&self, c: &FieldElement) -> Self {
        Self::new(self.num.scale(c), self.den.clone()).expect("denominator nonzero")
    }
}

impl std::ops::Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        if self.den == rhs.den {
            return RationalFunction::new(&self.num + &rhs.num, self.den.clone()).expect("nonzero");
        }
        RationalFunction::new(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
        .expect("nonzero")
    }
}

impl std::ops::Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl std::ops::Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl std::ops::Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        RationalFunction::new(&self.num * &rhs.num, &self.den * &rhs.den).expect("nonzero")
    }
}

fn needs_parens(s: &str) -> bool {
    s.contains('+')
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        let (n, d) = (self.num.to_string(), self.den.to_string());
        let n = if needs_parens(&n) { format!("({n})") } else { n };
        let d = if needs_parens(&d) || d.contains('*') {
            format!("({d})")
        } else {
            d
        };
        write!(f, "{n}/{d}")
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Valuation value: an integer or `+inf` (the valuation of zero).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

/// A place of k: a monic irreducible `a` of F_q[T], or the infinite place `1/T`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Place {
    Infinity(FiniteField),
    Finite(Polynomial),
}

impl Place {
    pub fn infinity(field: &FiniteField) -> Self {
        Place::Infinity(field.clone())
    }

    /// Validates that `a` is monic irreducible.
    pub fn finite(a: Polynomial) -> Result<Self> {
        if !a.is_monic() || !a.is_irreducible() {
            return Err(Error::NotIrreducible(a.to_string()));
        }
        Ok(Place::Finite(a))
    }

    pub fn base_field(&self) -> &FiniteField {
        match self {
            Place::Infinity(f) => f,
            Place::Finite(a) => a.field(),
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Place::Infinity(_))
    }

    pub fn polynomial(&self) -> Option<&Polynomial> {
        match self {
            Place::Infinity(_) => None,
            Place::Finite(a) => Some(a),
        }
    }

    pub fn degree(&self) -> usize {
        match self {
            Place::Infinity(_) => 1,
            Place::Finite(a) => a.degree().expect("nonzero"),
        }
    }

    /// `q^degree`.
    pub fn residue_order(&self) -> u64 {
        self.base_field().order().pow(self.degree() as u32)
    }

    /// Multiplicity of the place in a nonzero polynomial (finite places only).
    fn multiplicity(a: &Polynomial, f: &Polynomial) -> i64 {
        let mut f = f.clone();
        let mut k = 0;
        loop {
            let (q, r) = f.divmod(a).expect("a is nonzero");
            if !r.is_zero() {
                return k;
            }
            f = q;
            k += 1;
        }
    }

    pub fn valuation(&self, x: &RationalFunction) -> Valuation {
        if x.is_zero() {
            return Valuation::Infinite;
        }
        Valuation::Finite(match self {
            Place::Infinity(_) => x.den.deg() - x.num.deg(),
            Place::Finite(a) => Self::multiplicity(a, &x.num) - Self::multiplicity(a, &x.den),
        })
    }

    /// The uniformizer `a` (or `1/T` at infinity) as an element of k.
    pub fn uniformizer(&self) -> RationalFunction {
        match self {
            Place::Infinity(f) => RationalFunction::t(f).inverse().expect("T is nonzero"),
            Place::Finite(a) => RationalFunction::from_poly(a.clone()),
        }
    }
}

impl PartialOrd for Place {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Infinity first, then finite places by (degree, lexicographic).
impl Ord for Place {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Place::Infinity(_), Place::Infinity(_)) => Ordering::Equal,
            (Place::Infinity(_), _) => Ordering::Less,
            (_, Place::Infinity(_)) => Ordering::Greater,
            (Place::Finite(a), Place::Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Infinity(_) => f.write_str("inf"),
            Place::Finite(a) => write!(f, "{a}"),
        }
    }
}

impl fmt::Debug for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for Place {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Finite places of degree `<= max_degree`, preceded by infinity when requested.
pub fn enumerate_places(field: &FiniteField, max_degree: usize, include_infinity: bool) -> Vec<Place> {
    let mut places = Vec::new();
    if include_infinity {
        places.push(Place::infinity(field));
    }
    places.extend(
        enumerate_monic_irreducibles(field, max_degree)
            .into_iter()
            .map(Place::Finite),
    );
    places
}

/// The generator `c = a^{-i}` (or `T^i` at infinity) of an Artin–Schreier extension
/// totally ramified at `a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ASGenerator {
    pub place: Place,
    pub exponent: u32,
    pub value: RationalFunction,
}

/// Builds `a^{-i}`; exponents divisible by `p` are rejected unless `permissive`.
pub fn make_as_generator(place: &Place, i: u32, permissive: bool) -> Result<ASGenerator> {
    if i == 0 {
        return Err(Error::NonPositiveExponent);
    }
    let p = place.base_field().characteristic();
    if i % p == 0 && !permissive {
        return Err(Error::ExponentDivisibleByP { i, p });
    }
    let value = place.uniformizer().powi(-(i as i64))?;
    Ok(ASGenerator {
        place: place.clone(),
        exponent: i,
        value,
    })
}

/// Partial fraction decomposition `c = P + sum_a sum_{m>=1} h_{a,m} / a^m`, with
/// `deg h_{a,m} < deg a`.
#[derive(Debug, Clone)]
pub struct PartialFractions {
    pub polynomial_part: Polynomial,
    /// Per pole place, `digits[m-1] = h_{a,m}`.
    pub principal_parts: Vec<(Place, Vec<Polynomial>)>,
}

/// `a`-adic digits of `f`: `f = sum_k r_k a^k`, `deg r_k < deg a`.
pub fn adic_digits(f: &Polynomial, a: &Polynomial, max_digits: Option<usize>) -> Vec<Polynomial> {
    let mut digits = Vec::new();
    let mut rest = f.clone();
    while !rest.is_zero() && max_digits.map_or(true, |n| digits.len() < n) {
        let (q, r) = rest.divmod(a).expect("a is nonzero");
        digits.push(r);
        rest = q;
    }
    digits
}

impl RationalFunction {
    pub fn partial_fractions(&self) -> PartialFractions {
        let field = self.field();
        let (poly_part, rem) = self.num.divmod(&self.den).expect("den nonzero");
        let mut principal_parts = Vec::new();
        if !self.den.is_one() {
            let factorization = self.den.factor().expect("den nonzero");
            for (a, e) in factorization.factors {
                let ae = a.pow(e as u64);
                let cofactor = self.den.exact_div(&ae);
                let inv = cofactor.inverse_mod(&ae).expect("coprime factors");
                let local = (&rem * &inv).rem(&ae).expect("nonzero");
                // local / a^e = sum_k r_k a^{k-e}; h_m = r_{e-m}
                let mut digits = adic_digits(&local, &a, Some(e as usize));
                digits.resize(e as usize, Polynomial::zero(field));
                let h: Vec<Polynomial> = digits.into_iter().rev().collect();
                principal_parts.push((Place::Finite(a), h));
            }
        }
        PartialFractions {
            polynomial_part: poly_part,
            principal_parts,
        }
    }
}

impl PartialFractions {
    pub fn recombine(&self) -> RationalFunction {
        let mut acc = RationalFunction::from_poly(self.polynomial_part.clone());
        for (place, digits) in &self.principal_parts {
            let a = place.polynomial().expect("finite place");
            for (m, h) in digits.iter().enumerate() {
                let term = RationalFunction::new(h.clone(), a.pow(m as u64 + 1)).expect("nonzero");
                acc = &acc + &term;
            }
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse_place, parse_rational};

    fn f2() -> FiniteField {
        FiniteField::prime(2).unwrap()
    }

    #[test]
    fn valuation_examples() {
        let f = f2();
        let t = parse_place(&f, "T").unwrap();
        let inf = Place::infinity(&f);
        let a = parse_place(&f, "T^2+T+1").unwrap();
        assert_eq!(t.valuation(&parse_rational(&f, "1/T").unwrap()), Valuation::Finite(-1));
        assert_eq!(inf.valuation(&parse_rational(&f, "T^2/(T+1)").unwrap()), Valuation::Finite(-1));
        assert_eq!(
            a.valuation(&parse_rational(&f, "(T^2+T+1)^3*(T+1)").unwrap()),
            Valuation::Finite(3)
        );
        assert_eq!(t.valuation(&RationalFunction::zero(&f)), Valuation::Infinite);
    }

    #[test]
    fn places_enumeration() {
        let f = f2();
        let names: Vec<String> = enumerate_places(&f, 1, true).iter().map(ToString::to_string).collect();
        assert_eq!(names, ["inf", "T", "T+1"]);
        assert_eq!(enumerate_places(&f, 2, true).len(), 4);
        let f3 = FiniteField::prime(3).unwrap();
        let names: Vec<String> = enumerate_places(&f3, 1, false).iter().map(ToString::to_string).collect();
        assert_eq!(names, ["T", "T+1", "T+2"]);
    }

    #[test]
    fn generator_examples() {
        let f = f2();
        let t = parse_place(&f, "T").unwrap();
        let g = make_as_generator(&t, 1, false).unwrap();
        assert_eq!(g.value, parse_rational(&f, "1/T").unwrap());
        let f3 = FiniteField::prime(3).unwrap();
        let g = make_as_generator(&Place::infinity(&f3), 2, false).unwrap();
        assert_eq!(g.value, parse_rational(&f3, "T^2").unwrap());
        assert_eq!(
            make_as_generator(&t, 2, false),
            Err(Error::ExponentDivisibleByP { i: 2, p: 2 })
        );
        assert!(make_as_generator(&t, 2, true).is_ok());
        assert_eq!(make_as_generator(&t, 0, true), Err(Error::NonPositiveExponent));
    }

    #[test]
    fn reduction_is_canonical() {
        let f = FiniteField::prime(3).unwrap();
        let a = parse_rational(&f, "(T^2-1)/(2*T+2)").unwrap();
        let b = parse_rational(&f, "(T-1)/2").unwrap();
        assert_eq!(a, b);
        assert!(a.denominator().is_monic());
    }

    #[test]
    fn partial_fractions_recombine() {
        let f = f2();
        for s in ["1/T", "(T^5+1)/(T^3*(T+1)^2*(T^2+T+1))", "T^3+1/(T^2+T+1)^2", "T"] {
            let c = parse_rational(&f, s).unwrap();
            assert_eq!(c.partial_fractions().recombine(), c, "{s}");
        }
    }

    #[test]
    fn non_irreducible_place_rejected() {
        let f = f2();
        assert!(parse_place(&f, "T^2+1").is_err());
    }
}
