//! Univariate polynomials over a finite field.
//!
//! Factorization is the usual three stages: squarefree decomposition,
//! distinct-degree splitting, then randomized equal-degree splitting (trace map
//! in characteristic 2, `h^{(Q^d-1)/2} - 1` otherwise).

use std::cmp::Ordering;
use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::finite_field::{FieldElement, FiniteField};

/// Seed used by [`Polynomial::factor`].
/// Largest candidate count for which irreducibles are found by sieving.
const SIEVE_LIMIT: u64 = 1 << 21;

pub const DEFAULT_FACTOR_SEED: u64 = 0x5eed;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    field: FiniteField,
    /// Ascending degree, no trailing zeros.
    coeffs: Vec<FieldElement>,
}

/// `unit * prod(factor^multiplicity)`, factors monic irreducible and sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub unit: FieldElement,
    pub factors: Vec<(Polynomial, u32)>,
}

impl Factorization {
    pub fn expand(&self) -> Polynomial {
        let field = self.unit.field().clone();
        self.factors
            .iter()
            .fold(Polynomial::constant(&field, self.unit.clone()), |acc, (f, e)| {
                &acc * &f.pow(*e as u64)
            })
    }
}

impl Polynomial {
    pub fn new(field: &FiniteField, mut coeffs: Vec<FieldElement>) -> Self {
        while coeffs.last().is_some_and(FieldElement::is_zero) {
            coeffs.pop();
        }
        Polynomial {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn zero(field: &FiniteField) -> Self {
        Self::new(field, Vec::new())
    }

    pub fn one(field: &FiniteField) -> Self {
        Self::constant(field, field.one())
    }

    pub fn constant(field: &FiniteField, c: FieldElement) -> Self {
        Self::new(field, vec![c])
    }

    /// The indeterminate `T`.
    pub fn x(field: &FiniteField) -> Self {
        Self::monomial(field.one(), 1)
    }

    pub fn monomial(c: FieldElement, k: usize) -> Self {
        let field = c.field().clone();
        let mut coeffs = vec![field.zero(); k];
        coeffs.push(c);
        Self::new(&field, coeffs)
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> FieldElement {
        self.coeffs.get(k).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with `deg 0 = -1`, convenient for valuation arithmetic.
    pub fn deg(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn leading_coeff(&self) -> FieldElement {
        self.coeffs.last().cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(FieldElement::is_one)
    }

    pub fn monic(&self) -> Self {
        match self.coeffs.last() {
            None => self.clone(),
            Some(lc) => self.scale(&lc.inverse().expect("leading coefficient is nonzero")),
        }
    }

    pub fn scale(&self, c: &FieldElement) -> Self {
        Self::new(&self.field, self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Applies `map` to every coefficient, landing in `target`.
    pub fn map_coeffs(&self, target: &FiniteField, map: impl Fn(&FieldElement) -> FieldElement) -> Self {
        Self::new(target, self.coeffs.iter().map(map).collect())
    }

    pub fn eval(&self, x: &FieldElement) -> FieldElement {
        self.coeffs
            .iter()
            .rev()
            .fold(x.field().zero(), |acc, c| &(&acc * x) + c)
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * &self.field.from_u32((k % self.field.characteristic() as usize) as u32))
            .collect();
        Self::new(&self.field, coeffs)
    }

    pub fn divmod(&self, g: &Self) -> Result<(Self, Self)> {
        let Some(dg) = g.degree() else {
            return Err(Error::DivisionByZero);
        };
        let lc_inv = g.leading_coeff().inverse()?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dg {
            return Ok((Self::zero(&self.field), self.clone()));
        }
        let mut quot = vec![self.field.zero(); rem.len() - dg];
        for k in (dg..rem.len()).rev() {
            if rem[k].is_zero() {
                continue;
            }
            let c = &rem[k] * &lc_inv;
            for (j, gj) in g.coeffs.iter().enumerate() {
                let slot = &mut rem[k - dg + j];
                *slot = &*slot - &(&c * gj);
            }
            quot[k - dg] = c;
        }
        rem.truncate(dg);
        Ok((Self::new(&self.field, quot), Self::new(&self.field, rem)))
    }

    pub fn rem(&self, g: &Self) -> Result<Self> {
        Ok(self.divmod(g)?.1)
    }

    /// Exact quotient; panics in debug builds if `g` does not divide `self`.
    pub fn exact_div(&self, g: &Self) -> Self {
        let (q, r) = self.divmod(g).expect("nonzero divisor");
        debug_assert!(r.is_zero(), "inexact division");
        q
    }

    pub fn divides(&self, f: &Self) -> bool {
        f.rem(self).map(|r| r.is_zero()).unwrap_or(false)
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b).expect("b is nonzero");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `(g, s, t)` with `g = s*self + t*other` and `g` monic.
    pub fn ext_gcd(&self, other: &Self) -> (Self, Self, Self) {
        let zero = Self::zero(&self.field);
        let one = Self::one(&self.field);
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (one.clone(), zero.clone());
        let (mut t0, mut t1) = (zero, one);
        while !r1.is_zero() {
            let (q, r) = r0.divmod(&r1).expect("r1 is nonzero");
            r0 = std::mem::replace(&mut r1, r);
            let s = &s0 - &(&q * &s1);
            s0 = std::mem::replace(&mut s1, s);
            let t = &t0 - &(&q * &t1);
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = r0.leading_coeff().inverse().expect("nonzero");
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    /// Inverse of `self` modulo `m`, if coprime.
    pub fn inverse_mod(&self, m: &Self) -> Option<Self> {
        let (g, s, _) = self.ext_gcd(m);
        g.is_one().then(|| s.rem(m).expect("modulus nonzero"))
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut result = Self::one(&self.field);
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

    pub fn powmod(&self, mut e: u64, m: &Self) -> Self {
        let mut result = Self::one(&self.field).rem(m).expect("modulus nonzero");
        let mut base = self.rem(m).expect("modulus nonzero");
        while e > 0 {
            if e & 1 == 1 {
                result = (&result * &base).rem(m).expect("modulus nonzero");
            }
            e >>= 1;
            if e > 0 {
                base = (&base * &base).rem(m).expect("modulus nonzero");
            }
        }
        result
    }

    /// `g` with `g^p = self`; requires every exponent divisible by `p`.
    fn pth_root(&self) -> Self {
        let p = self.field.characteristic() as usize;
        let coeffs = self
            .coeffs
            .iter()
            .step_by(p)
            .map(FieldElement::frobenius_root)
            .collect();
        Self::new(&self.field, coeffs)
    }

    /// Rabin's irreducibility test.
    pub fn is_irreducible(&self) -> bool {
        let Some(n) = self.degree() else {
            return false;
        };
        match n {
            0 => return false,
            1 => return true,
            _ => {}
        }
        let f = self.monic();
        let q = self.field.order();
        let x = Self::x(&self.field);
        let mut powers = Vec::with_capacity(n);
        let mut h = x.clone();
        for _ in 0..n {
            h = h.powmod(q, &f);
            powers.push(h.clone());
        }
        if powers[n - 1] != x {
            return false;
        }
        prime_divisors(n)
            .into_iter()
            .all(|r| (&powers[n / r - 1] - &x).gcd(&f).is_one())
    }

    /// Squarefree decomposition of a monic polynomial: pairs `(g, i)` with `f = prod g^i`.
    pub fn squarefree_decomposition(&self) -> Vec<(Self, u32)> {
        let p = self.field.characteristic();
        let f = self.monic();
        if f.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let df = f.derivative();
        if df.is_zero() {
            return f
                .pth_root()
                .squarefree_decomposition()
                .into_iter()
                .map(|(g, m)| (g, m * p))
                .collect();
        }
        let mut out = Vec::new();
        let mut c = f.gcd(&df);
        let mut w = f.exact_div(&c);
        let mut i = 1;
        while !w.is_one() {
            let y = w.gcd(&c);
            let z = w.exact_div(&y);
            if !z.is_one() {
                out.push((z, i));
            }
            i += 1;
            w = y;
            c = c.exact_div(&w);
        }
        if !c.is_one() {
            out.extend(
                c.pth_root()
                    .squarefree_decomposition()
                    .into_iter()
                    .map(|(g, m)| (g, m * p)),
            );
        }
        out
    }

    /// Distinct-degree splitting of a monic squarefree polynomial.
    pub fn distinct_degree_split(&self) -> Vec<(Self, usize)> {
        let q = self.field.order();
        let x = Self::x(&self.field);
        let mut rest = self.monic();
        let mut h = x.clone();
        let mut out = Vec::new();
        let mut d = 1;
        while rest.degree().unwrap_or(0) >= 2 * d {
            h = h.powmod(q, &rest);
            let g = rest.gcd(&(&h - &x));
            if !g.is_one() {
                rest = rest.exact_div(&g);
                h = h.rem(&rest).expect("nonzero");
                out.push((g, d));
            }
            d += 1;
        }
        if let Some(n) = rest.degree().filter(|&n| n > 0) {
            out.push((rest, n));
        }
        out
    }

    /// Splits a monic squarefree product of degree-`d` irreducibles.
    pub fn equal_degree_split(&self, d: usize, rng: &mut ChaCha8Rng) -> Vec<Self> {
        let n = self.degree().expect("nonzero");
        if n <= d {
            return vec![self.monic()];
        }
        let field = &self.field;
        let q = field.order();
        let p = field.characteristic();
        loop {
            let h = Self::new(
                field,
                (0..n)
                    .map(|_| field.element_at(rand::Rng::gen_range(rng, 0..q)))
                    .collect(),
            );
            if h.degree().unwrap_or(0) == 0 {
                continue;
            }
            let t = if p == 2 {
                // absolute trace map F_{q^d} -> F_2 applied to h
                let mut acc = h.clone();
                let mut cur = h.clone();
                for _ in 1..field.degree() * d {
                    cur = (&cur * &cur).rem(self).expect("nonzero");
                    acc = &acc + &cur;
                }
                acc
            } else {
                let g = h.powmod((q - 1) / 2, self);
                let mut acc = g.clone();
                let mut cur = g;
                for _ in 1..d {
                    cur = cur.powmod(q, self);
                    acc = (&acc * &cur).rem(self).expect("nonzero");
                }
                &acc - &Self::one(field)
            };
            let g = self.gcd(&t);
            let dg = g.degree().unwrap_or(0);
            if dg > 0 && dg < n {
                let other = self.exact_div(&g);
                let mut out = g.equal_degree_split(d, rng);
                out.extend(other.equal_degree_split(d, rng));
                return out;
            }
        }
    }

    pub fn factor(&self) -> Result<Factorization> {
        self.factor_with_seed(DEFAULT_FACTOR_SEED)
    }

    /// Complete factorization; the seed only drives equal-degree splitting, so
    /// the (sorted) result does not depend on it.
    pub fn factor_with_seed(&self, seed: u64) -> Result<Factorization> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut factors = Vec::new();
        for (part, mult) in self.squarefree_decomposition() {
            for (group, d) in part.distinct_degree_split() {
                for g in group.equal_degree_split(d, &mut rng) {
                    factors.push((g, mult));
                }
            }
        }
        factors.sort();
        // merge equal factors coming from different squarefree layers
        let mut merged: Vec<(Polynomial, u32)> = Vec::new();
        for (g, m) in factors {
            match merged.last_mut() {
                Some((h, k)) if *h == g => *k += m,
                _ => merged.push((g, m)),
            }
        }
        Ok(Factorization {
            unit: self.leading_coeff(),
            factors: merged,
        })
    }

    /// Distinct roots in the coefficient field, ascending.
    pub fn roots(&self) -> Vec<FieldElement> {
        if self.is_zero() {
            return Vec::new();
        }
        let f = self.monic();
        let q = self.field.order();
        let x = Self::x(&self.field);
        let split = f.gcd(&(&x.powmod(q, &f) - &x));
        if split.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_FACTOR_SEED);
        let mut roots: Vec<FieldElement> = split
            .equal_degree_split(1, &mut rng)
            .into_iter()
            .map(|g| -&g.coeff(0))
            .collect();
        roots.sort();
        roots
    }

    /// All monic polynomials of degree `d`, in lexicographic order of ascending coefficients.
    pub fn monic_of_degree(field: &FiniteField, d: usize) -> impl Iterator<Item = Polynomial> + '_ {
        let q = field.order();
        let count = q.checked_pow(d as u32).expect("enumeration size fits in u64");
        (0..count).map(move |mut idx| {
            let mut coeffs = vec![field.zero(); d + 1];
            for k in (0..d).rev() {
                coeffs[k] = field.element_at(idx % q);
                idx /= q;
            }
            coeffs[d] = field.one();
            Polynomial::new(field, coeffs)
        })
    }

    /// Position of a monic polynomial of degree `d` in [`Polynomial::monic_of_degree`].
    fn monic_index(&self, d: usize) -> usize {
        let q = self.field.order();
        (0..d).fold(0u64, |idx, k| idx * q + self.coeff(k).rank()) as usize
    }

    /// Monic irreducibles of exactly degree `d`, in the canonical order.
    pub fn monic_irreducibles(field: &FiniteField, d: usize) -> Vec<Polynomial> {
        let count = field.order().checked_pow(d as u32);
        match count {
            Some(count) if d >= 2 && count <= SIEVE_LIMIT => Self::sieve_irreducibles(field, d, count as usize),
            _ => Self::monic_of_degree(field, d)
                .filter(|f| (d == 1 || f.coeff(0).is_nonzero()) && f.is_irreducible())
                .collect(),
        }
    }

    /// Marks every product `g*h` with `g` irreducible of degree `<= d/2`; the rest are irreducible.
    fn sieve_irreducibles(field: &FiniteField, d: usize, count: usize) -> Vec<Polynomial> {
        let mut reducible = vec![false; count];
        for e in 1..=d / 2 {
            for g in Self::monic_irreducibles(field, e) {
                for h in Self::monic_of_degree(field, d - e) {
                    reducible[(&g * &h).monic_index(d)] = true;
                }
            }
        }
        Self::monic_of_degree(field, d)
            .zip(reducible)
            .filter(|(_, r)| !r)
            .map(|(f, _)| f)
            .collect()
    }
}

/// All monic irreducibles of degree `1..=max_degree`, ordered by (degree, lexicographic).
pub fn enumerate_monic_irreducibles(field: &FiniteField, max_degree: usize) -> Vec<Polynomial> {
    (1..=max_degree)
        .flat_map(|d| Polynomial::monic_irreducibles(field, d))
        .collect()
}

fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl PartialOrd for Polynomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// By degree, then lexicographically on ascending coefficients.
impl Ord for Polynomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

fn add_coeffs(a: &Polynomial, b: &Polynomial, sub: bool) -> Polynomial {
    assert!(a.field == b.field, "field mismatch");
    let n = a.coeffs.len().max(b.coeffs.len());
    let coeffs = (0..n)
        .map(|k| {
            let (x, y) = (a.coeff(k), b.coeff(k));
            if sub {
                &x - &y
            } else {
                &x + &y
            }
        })
        .collect();
    Polynomial::new(&a.field, coeffs)
}

impl std::ops::Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        add_coeffs(self, rhs, false)
    }
}

impl std::ops::Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        add_coeffs(self, rhs, true)
    }
}

impl std::ops::Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::new(&self.field, self.coeffs.iter().map(|c| -c).collect())
    }
}

impl std::ops::Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        assert!(self.field == rhs.field, "field mismatch");
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero(&self.field);
        }
        let mut coeffs = vec![self.field.zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] = &coeffs[i + j] + &(a * b);
            }
        }
        Polynomial::new(&self.field, coeffs)
    }
}

fn is_simple_term(s: &str) -> bool {
    !s.contains('+')
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str("+")?;
            }
            first = false;
            let cs = c.to_string();
            let mono = match k {
                0 => String::new(),
                1 => "T".to_string(),
                _ => format!("T^{k}"),
            };
            match (k, c.is_one()) {
                (0, _) => f.write_str(&cs)?,
                (_, true) => f.write_str(&mono)?,
                _ if is_simple_term(&cs) => write!(f, "{cs}*{mono}")?,
                _ => write!(f, "({cs})*{mono}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> FiniteField {
        FiniteField::prime(2).unwrap()
    }

    fn poly(field: &FiniteField, coeffs: &[u32]) -> Polynomial {
        Polynomial::new(field, coeffs.iter().map(|&c| field.from_u32(c)).collect())
    }

    #[test]
    fn divmod_and_gcd_examples() {
        let f = f2();
        let (q, r) = poly(&f, &[0, 1, 1]).divmod(&poly(&f, &[0, 1])).unwrap();
        assert_eq!(q, poly(&f, &[1, 1]));
        assert!(r.is_zero());
        assert_eq!(poly(&f, &[1, 0, 1]).gcd(&poly(&f, &[1, 1])), poly(&f, &[1, 1]));
        let f3 = FiniteField::prime(3).unwrap();
        let g = poly(&f3, &[1, 0, 2]);
        assert_eq!(g.gcd(&Polynomial::zero(&f3)), g.monic());
        assert_eq!(
            g.divmod(&Polynomial::zero(&f3)),
            Err(Error::DivisionByZero)
        );
    }

    #[test]
    fn factor_examples() {
        let f = f2();
        let fac = poly(&f, &[1, 0, 1]).factor().unwrap();
        assert_eq!(fac.factors, vec![(poly(&f, &[1, 1]), 2)]);
        let fac = poly(&f, &[1, 1, 1]).factor().unwrap();
        assert_eq!(fac.factors, vec![(poly(&f, &[1, 1, 1]), 1)]);
        let f3 = FiniteField::prime(3).unwrap();
        let fac = poly(&f3, &[1, 0, 1]).factor().unwrap();
        assert_eq!(fac.factors, vec![(poly(&f3, &[1, 0, 1]), 1)]);
        assert_eq!(Polynomial::zero(&f).factor(), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn factor_pth_powers_and_mixed_multiplicities() {
        let f3 = FiniteField::prime(3).unwrap();
        let a = poly(&f3, &[1, 1]);
        let b = poly(&f3, &[1, 0, 1]);
        let c = poly(&f3, &[0, 1]);
        let prod = &(&a.pow(3) * &b.pow(4)) * &(&c * &f3_scalar(&f3, 2));
        let fac = prod.factor().unwrap();
        assert_eq!(fac.expand(), prod);
        assert_eq!(fac.factors, vec![(c, 1), (a, 3), (b, 4)]);
    }

    fn f3_scalar(f: &FiniteField, c: u32) -> Polynomial {
        Polynomial::constant(f, f.from_u32(c))
    }

    #[test]
    fn enumeration_examples() {
        let f = f2();
        let all = enumerate_monic_irreducibles(&f, 1);
        assert_eq!(all.iter().map(ToString::to_string).collect::<Vec<_>>(), ["T", "T+1"]);
        assert_eq!(Polynomial::monic_irreducibles(&f, 4).len(), 3);
        let f3 = FiniteField::prime(3).unwrap();
        let all = enumerate_monic_irreducibles(&f3, 1);
        assert_eq!(
            all.iter().map(ToString::to_string).collect::<Vec<_>>(),
            ["T", "T+1", "T+2"]
        );
    }

    #[test]
    fn roots_over_extension() {
        let f4 = FiniteField::new(2, 2).unwrap();
        let g = f4.modulus().map_coeffs(&f4, |c| f4.from_u32(c.coefficients().next().unwrap()));
        let roots = g.roots();
        assert_eq!(roots.len(), 2);
        assert_eq!(roots[0], f4.generator());
    }

    #[test]
    fn display_with_compound_coefficients() {
        let f4 = FiniteField::new(2, 2).unwrap();
        let w = f4.generator();
        let p = Polynomial::new(&f4, vec![w.clone(), f4.zero(), &w + &f4.one()]);
        assert_eq!(p.to_string(), "(w+1)*T^2+w");
        assert_eq!(poly(&f2(), &[1, 1, 0, 1]).to_string(), "T^3+T+1");
    }
}
