//! Finite fields F_{p^m} in the polynomial basis.
//!
//! A field is `F_p[w]/(f)` where `f` is the lexicographically smallest monic
//! irreducible of degree `m` (coefficients compared from the constant term up).
//! Elements are fixed-length coefficient vectors in `1, w, ..., w^{m-1}` and are
//! always fully reduced, so equality is structural.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::linalg;
use crate::poly::Polynomial;

/// Default cap on the order of a base field accepted from configuration.
pub const DEFAULT_MAX_ORDER: u64 = 729;

type Coeffs = SmallVec<[u16; 12]>;

#[derive(Debug, PartialEq, Eq, Hash)]
struct FieldData {
    p: u32,
    degree: usize,
    /// Low coefficients of the monic modulus (length `degree`).
    modulus: Vec<u16>,
    order: u64,
}

/// A finite field of characteristic `p` and degree `m` over F_p.
#[derive(Clone)]
pub struct FiniteField(Arc<FieldData>);

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for FiniteField {}

impl Hash for FiniteField {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.hash(state)
    }
}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{}", self.0.p, self.0.degree)
    }
}

impl fmt::Display for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.0.p, self.0.degree)
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl FiniteField {
    /// The prime field F_p.
    pub fn prime(p: u32) -> Result<Self> {
        if !is_prime(p as u64) || p > u16::MAX as u32 {
            return Err(Error::InvalidField(format!("{p} is not a supported prime")));
        }
        Ok(FiniteField(Arc::new(FieldData {
            p,
            degree: 1,
            modulus: vec![0],
            order: p as u64,
        })))
    }

    /// F_{p^m} with the canonical modulus.
    pub fn new(p: u32, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidField(format!("{p}^0")));
        }
        let prime = Self::prime(p)?;
        if m == 1 {
            return Ok(prime);
        }
        let order = (p as u64)
            .checked_pow(m as u32)
            .ok_or_else(|| Error::InvalidField(format!("{p}^{m} overflows")))?;
        let modulus = Polynomial::monic_of_degree(&prime, m)
            .find(|f| f.coeff(0).is_nonzero() && f.is_irreducible())
            .expect("an irreducible of every degree exists");
        let low = modulus.coeffs()[..m].iter().map(|c| c.coeffs[0]).collect();
        Ok(FiniteField(Arc::new(FieldData {
            p,
            degree: m,
            modulus: low,
            order,
        })))
    }

    /// Parses `p^m` or a prime power `q`, rejecting orders above `max_order`.
    pub fn parse_spec(spec: &str, max_order: u64) -> Result<Self> {
        let bad = || Error::InvalidField(spec.to_string());
        let spec = spec.trim();
        let (p, m) = match spec.split_once('^') {
            Some((p, m)) => (
                p.trim().parse::<u64>().map_err(|_| bad())?,
                m.trim().parse::<u32>().map_err(|_| bad())?,
            ),
            None => {
                let q: u64 = spec.parse().map_err(|_| bad())?;
                let p = (2..=q).find(|d| q % d == 0).ok_or_else(bad)?;
                let mut m = 0;
                let mut rest = q;
                while rest % p == 0 {
                    rest /= p;
                    m += 1;
                }
                if rest != 1 {
                    return Err(bad());
                }
                (p, m)
            }
        };
        if !is_prime(p) || m == 0 {
            return Err(bad());
        }
        let order = p.checked_pow(m).ok_or_else(bad)?;
        if order > max_order {
            return Err(Error::FieldTooLarge {
                order,
                limit: max_order,
            });
        }
        Self::new(p as u32, m as usize)
    }

    pub fn characteristic(&self) -> u32 {
        self.0.p
    }

    /// Degree over the prime field.
    pub fn degree(&self) -> usize {
        self.0.degree
    }

    pub fn order(&self) -> u64 {
        self.0.order
    }

    /// The defining modulus as a polynomial over the prime field.
    pub fn modulus(&self) -> Polynomial {
        let prime = FiniteField::prime(self.0.p).expect("characteristic is prime");
        let mut coeffs: Vec<FieldElement> =
            self.0.modulus.iter().map(|&c| prime.from_u32(c as u32)).collect();
        coeffs.push(prime.one());
        Polynomial::new(&prime, coeffs)
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            field: self.clone(),
            coeffs: SmallVec::from_elem(0, self.0.degree),
        }
    }

    pub fn one(&self) -> FieldElement {
        self.from_u32(1)
    }

    /// The class of the generator `w` (equal to `-f(0)` in a prime field).
    pub fn generator(&self) -> FieldElement {
        if self.0.degree == 1 {
            return self.from_u32((self.0.p - self.0.modulus[0] as u32) % self.0.p);
        }
        let mut x = self.zero();
        x.coeffs[1] = 1;
        x
    }

    pub fn from_u32(&self, c: u32) -> FieldElement {
        let mut x = self.zero();
        x.coeffs[0] = (c % self.0.p) as u16;
        x
    }

    pub fn from_i64(&self, c: i64) -> FieldElement {
        self.from_u32(c.rem_euclid(self.0.p as i64) as u32)
    }

    /// Builds an element from coefficients of `1, w, w^2, ...`; extra entries are rejected.
    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FieldElement> {
        if coeffs.len() > self.0.degree {
            return Err(Error::InvalidField(format!(
                "{} coefficients for a degree-{} field",
                coeffs.len(),
                self.0.degree
            )));
        }
        let mut x = self.zero();
        for (slot, &c) in x.coeffs.iter_mut().zip(coeffs) {
            *slot = (c % self.0.p) as u16;
        }
        Ok(x)
    }

    /// The element at position `rank` in the canonical element order.
    pub fn element_at(&self, rank: u64) -> FieldElement {
        let p = self.0.p as u64;
        let mut x = self.zero();
        let mut r = rank % self.0.order;
        for k in (0..self.0.degree).rev() {
            x.coeffs[k] = (r % p) as u16;
            r /= p;
        }
        x
    }

    /// All elements in the canonical order (coefficient vectors compared constant-first).
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.0.order).map(move |r| self.element_at(r))
    }

    /// Matrix of the F_p-linear map `x -> x^p - x` in the basis `w^k` (column k = image of w^k).
    fn wp_matrix(&self) -> Vec<Vec<u32>> {
        let m = self.0.degree;
        let mut rows = vec![vec![0u32; m]; m];
        let mut basis = self.one();
        let w = self.generator();
        for k in 0..m {
            let image = basis.pow(self.0.p as u64) - basis.clone();
            for (r, &c) in image.coeffs.iter().enumerate() {
                rows[r][k] = c as u32;
            }
            basis = &basis * &w;
        }
        rows
    }

    /// Image of a prime-field element embedded in this field.
    pub fn embed_prime(&self, c: u32) -> FieldElement {
        self.from_u32(c)
    }
}

/// An element of a [`FiniteField`].
#[derive(Clone)]
pub struct FieldElement {
    field: FiniteField,
    coeffs: Coeffs,
}

/// Binary operations accepted by [`FieldElement::apply`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl FieldElement {
    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    /// Coefficients in the basis `1, w, ..., w^{m-1}`.
    pub fn coefficients(&self) -> impl Iterator<Item = u32> + '_ {
        self.coeffs.iter().map(|&c| c as u32)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn is_nonzero(&self) -> bool {
        !self.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0] == 1 && self.coeffs[1..].iter().all(|&c| c == 0)
    }

    /// Position in the canonical element order.
    pub fn rank(&self) -> u64 {
        let p = self.field.0.p as u64;
        self.coeffs.iter().fold(0, |acc, &c| acc * p + c as u64)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    /// Checked arithmetic: fails on mismatched fields or division by zero.
    pub fn apply(&self, op: ArithOp, rhs: &Self) -> Result<Self> {
        self.check(rhs)?;
        Ok(match op {
            ArithOp::Add => self + rhs,
            ArithOp::Sub => self - rhs,
            ArithOp::Mul => self * rhs,
            ArithOp::Div => self.div(rhs)?,
        })
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(self.field.0.order - 2))
    }

    pub fn div(&self, rhs: &Self) -> Result<Self> {
        self.check(rhs)?;
        Ok(self * &rhs.inverse()?)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut result = self.field.one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// `x^p`.
    pub fn frobenius(&self) -> Self {
        self.pow(self.field.0.p as u64)
    }

    /// The unique `y` with `y^p = x`.
    pub fn frobenius_root(&self) -> Self {
        let mut y = self.clone();
        for _ in 1..self.field.0.degree {
            y = y.frobenius();
        }
        y
    }

    /// `Tr_{F_{p^m}/F_p}(x)` as an integer in `0..p`.
    pub fn trace_to_prime(&self) -> u32 {
        let mut acc = self.clone();
        let mut conj = self.clone();
        for _ in 1..self.field.0.degree {
            conj = conj.frobenius();
            acc = &acc + &conj;
        }
        debug_assert!(acc.coeffs[1..].iter().all(|&c| c == 0));
        acc.coeffs[0] as u32
    }

    /// Some `x` with `x^p - x = self`, or `None` when the trace is nonzero.
    pub fn solve_artin_schreier(&self) -> Option<Self> {
        let f = &self.field;
        let rhs: Vec<u32> = self.coefficients().collect();
        let sol = linalg::solve(&f.wp_matrix(), &rhs, f.0.p)?;
        Some(f.from_coeffs(&sol).expect("solution has field length"))
    }

    fn binary(&self, rhs: &Self, sub: bool) -> Self {
        assert!(self.field == rhs.field, "field mismatch");
        let p = self.field.0.p;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(&a, &b)| {
                let b = if sub { (p - b as u32) % p } else { b as u32 };
                ((a as u32 + b) % p) as u16
            })
            .collect();
        FieldElement {
            field: self.field.clone(),
            coeffs,
        }
    }

    fn mul_impl(&self, rhs: &Self) -> Self {
        assert!(self.field == rhs.field, "field mismatch");
        let data = &self.field.0;
        let m = data.degree;
        let p = data.p as u64;
        if m == 1 {
            let c = (self.coeffs[0] as u64 * rhs.coeffs[0] as u64 % p) as u16;
            return FieldElement {
                field: self.field.clone(),
                coeffs: SmallVec::from_elem(c, 1),
            };
        }
        let mut prod: SmallVec<[u64; 24]> = SmallVec::from_elem(0, 2 * m - 1);
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                prod[i + j] += a as u64 * b as u64;
            }
        }
        for k in (m..2 * m - 1).rev() {
            let c = prod[k] % p;
            if c != 0 {
                // w^m = -sum modulus[t] w^t
                for t in 0..m {
                    prod[k - m + t] += (p - data.modulus[t] as u64) * c;
                }
            }
        }
        let coeffs = prod[..m].iter().map(|&c| (c % p) as u16).collect();
        FieldElement {
            field: self.field.clone(),
            coeffs,
        }
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs && self.field == other.field
    }
}

impl Eq for FieldElement {}

impl Hash for FieldElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state)
    }
}

impl PartialOrd for FieldElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic on coefficients, constant term first.
impl Ord for FieldElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs.cmp(&other.coeffs)
    }
}

impl std::ops::Add for &FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &FieldElement) -> FieldElement {
        self.binary(rhs, false)
    }
}

impl std::ops::Sub for &FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &FieldElement) -> FieldElement {
        self.binary(rhs, true)
    }
}

impl std::ops::Mul for &FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: &FieldElement) -> FieldElement {
        self.mul_impl(rhs)
    }
}

impl std::ops::Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        self.field.zero().binary(self, true)
    }
}

impl std::ops::Add for FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: FieldElement) -> FieldElement {
        &self + &rhs
    }
}

impl std::ops::Sub for FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: FieldElement) -> FieldElement {
        &self - &rhs
    }
}

impl std::ops::Mul for FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: FieldElement) -> FieldElement {
        &self * &rhs
    }
}

impl std::ops::Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                f.write_str("+")?;
            }
            first = false;
            match (k, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => f.write_str("w")?,
                (1, c) => write!(f, "{c}*w")?,
                (k, 1) => write!(f, "w^{k}")?,
                (k, c) => write!(f, "{c}*w^{k}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f4() -> FiniteField {
        FiniteField::new(2, 2).unwrap()
    }

    #[test]
    fn canonical_moduli() {
        assert_eq!(f4().modulus().to_string(), "T^2+T+1");
        assert_eq!(FiniteField::new(3, 2).unwrap().modulus().to_string(), "T^2+1");
        assert_eq!(FiniteField::new(2, 3).unwrap().modulus().to_string(), "T^3+T^2+1");
        assert_eq!(FiniteField::new(5, 1).unwrap().order(), 5);
        assert!(FiniteField::new(4, 1).is_err());
    }

    #[test]
    fn f4_multiplication_table() {
        let f = f4();
        let w = f.generator();
        let w1 = &w + &f.one();
        assert_eq!(&w * &w1, f.one());
        assert_eq!(&w * &w, w1);
        assert_eq!(&w1 * &w1, w);
    }

    #[test]
    fn identities_and_characteristic() {
        let f2 = FiniteField::prime(2).unwrap();
        assert!((&f2.one() + &f2.one()).is_zero());
        let f = FiniteField::new(3, 3).unwrap();
        for x in f.elements() {
            assert_eq!(&x + &f.zero(), x);
            assert_eq!(&x * &f.one(), x);
        }
    }

    #[test]
    fn division_by_zero_and_mismatch() {
        let f = f4();
        assert_eq!(f.one().div(&f.zero()), Err(Error::DivisionByZero));
        let g = FiniteField::new(3, 1).unwrap();
        assert_eq!(f.one().apply(ArithOp::Add, &g.one()), Err(Error::FieldMismatch));
        assert_eq!(
            f.generator().apply(ArithOp::Div, &f.generator()).unwrap(),
            f.one()
        );
    }

    #[test]
    fn trace_examples() {
        let f = f4();
        assert_eq!(f.one().trace_to_prime(), 0);
        assert_eq!(f.generator().trace_to_prime(), 1);
        assert_eq!(FiniteField::prime(2).unwrap().one().trace_to_prime(), 1);
    }

    #[test]
    fn artin_schreier_examples() {
        let f = f4();
        assert_eq!(f.zero().solve_artin_schreier(), Some(f.zero()));
        assert_eq!(f.generator().solve_artin_schreier(), None);
        let x = f.one().solve_artin_schreier().unwrap();
        let w = f.generator();
        assert!(x == w || x == &w + &f.one());
    }

    #[test]
    fn frobenius_root_examples() {
        let f = f4();
        let w = f.generator();
        assert_eq!(f.one().frobenius_root(), f.one());
        assert_eq!(w.frobenius_root(), &w + &f.one());
        let f2 = FiniteField::prime(2).unwrap();
        assert_eq!(f2.zero().frobenius_root(), f2.zero());
    }

    #[test]
    fn frobenius_orbit_closes() {
        for (p, m) in [(2, 3), (3, 2), (5, 2), (2, 4)] {
            let f = FiniteField::new(p, m).unwrap();
            for x in f.elements() {
                assert_eq!(x.pow(f.order()), x);
            }
        }
    }

    #[test]
    fn spec_parsing() {
        assert_eq!(FiniteField::parse_spec("2^2", DEFAULT_MAX_ORDER).unwrap().order(), 4);
        assert_eq!(FiniteField::parse_spec("9", DEFAULT_MAX_ORDER).unwrap().degree(), 2);
        assert!(FiniteField::parse_spec("6", DEFAULT_MAX_ORDER).is_err());
        assert!(matches!(
            FiniteField::parse_spec("3^7", DEFAULT_MAX_ORDER),
            Err(Error::FieldTooLarge { .. })
        ));
    }

    #[test]
    fn display() {
        let f = FiniteField::new(3, 2).unwrap();
        let w = f.generator();
        let x = &(&w * &f.from_u32(2)) + &f.one();
        assert_eq!(x.to_string(), "2*w+1");
        assert_eq!(f.zero().to_string(), "0");
        assert_eq!((&w * &w).to_string(), "2");
    }
}
