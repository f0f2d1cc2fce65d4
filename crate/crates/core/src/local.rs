//! Completions k_v = κ(v)((π)) as truncated Laurent series.
//!
//! A [`LaurentSeries`] is known modulo `π^prec`. Arithmetic propagates
//! precision and never reports coefficients it does not know.
//!
//! Residue fields of places of degree `d` are represented directly as
//! `F_{p^{m d}}` with the canonical modulus, together with an explicit
//! embedding of the base field `F_q`.

use std::fmt;

use crate::error::{Error, Result};
use crate::finite_field::{FieldElement, FiniteField};
use crate::poly::Polynomial;
use crate::rational::{adic_digits, Place, RationalFunction, Valuation};

/// Precision to which a [`CompletionContext`] stores the image of `T`.
pub const DEFAULT_CONTEXT_PRECISION: i64 = 48;

/// Precision marker for series that are exact (finitely many terms).
pub const EXACT: i64 = i64::MAX / 4;

const MAX_RELATIVE_PRECISION: i64 = 1 << 16;

#[derive(Clone, PartialEq, Eq)]
pub struct LaurentSeries {
    field: FiniteField,
    /// Exponent of `coeffs[0]`; equals `prec` for a series known to be zero.
    val: i64,
    coeffs: Vec<FieldElement>,
    prec: i64,
}

impl LaurentSeries {
    /// Builds `sum coeffs[k] π^{val+k} + O(π^prec)`, dropping terms at or beyond `prec`.
    pub fn new(field: &FiniteField, val: i64, mut coeffs: Vec<FieldElement>, prec: i64) -> Self {
        let known = prec.saturating_sub(val).max(0);
        if (coeffs.len() as i64) > known {
            coeffs.truncate(known as usize);
        }
        while coeffs.last().is_some_and(FieldElement::is_zero) {
            coeffs.pop();
        }
        let lead = coeffs.iter().position(FieldElement::is_nonzero).unwrap_or(coeffs.len());
        coeffs.drain(..lead);
        let val = if coeffs.is_empty() { prec } else { val + lead as i64 };
        LaurentSeries {
            field: field.clone(),
            val,
            coeffs,
            prec,
        }
    }

    /// Exponent one past the last stored coefficient.
    fn end(&self) -> i64 {
        if self.coeffs.is_empty() {
            i64::MIN
        } else {
            self.val + self.coeffs.len() as i64
        }
    }

    pub fn zero(field: &FiniteField, prec: i64) -> Self {
        Self::new(field, prec, Vec::new(), prec)
    }

    pub fn constant(c: FieldElement, prec: i64) -> Self {
        let field = c.field().clone();
        Self::new(&field, 0, vec![c], prec)
    }

    /// `c π^k + O(π^prec)`.
    pub fn monomial(c: FieldElement, k: i64, prec: i64) -> Self {
        let field = c.field().clone();
        Self::new(&field, k, vec![c], prec)
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn precision(&self) -> i64 {
        self.prec
    }

    /// Lowest exponent that may carry a nonzero coefficient.
    pub fn order(&self) -> i64 {
        self.val
    }

    /// The valuation, or `None` when the series is zero to the known precision.
    pub fn valuation(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then_some(self.val)
    }

    pub fn is_known_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `π^k`, or `None` beyond the precision.
    pub fn coeff(&self, k: i64) -> Option<FieldElement> {
        if k >= self.prec {
            return None;
        }
        if k < self.val {
            return Some(self.field.zero());
        }
        Some(
            self.coeffs
                .get((k - self.val) as usize)
                .cloned()
                .unwrap_or_else(|| self.field.zero()),
        )
    }

    /// `(exponent, coefficient)` for every known nonzero term.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &FieldElement)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| c.is_nonzero())
            .map(move |(k, c)| (self.val + k as i64, c))
    }

    pub fn truncate(&self, prec: i64) -> Self {
        Self::new(&self.field, self.val, self.coeffs.clone(), prec.min(self.prec))
    }

    /// Reinterprets the series modulo `π^prec`, padding unknown coefficients with zeros.
    pub fn extend_precision(&self, prec: i64) -> Self {
        Self::new(&self.field, self.val.min(prec), self.coeffs.clone(), prec)
    }

    /// Multiplication by `π^k`.
    pub fn shift(&self, k: i64) -> Self {
        LaurentSeries {
            field: self.field.clone(),
            val: self.val.saturating_add(k),
            coeffs: self.coeffs.clone(),
            prec: self.prec.saturating_add(k),
        }
    }

    pub fn scale(&self, c: &FieldElement) -> Self {
        Self::new(&self.field, self.val, self.coeffs.iter().map(|a| a * c).collect(), self.prec)
    }

    fn combine(&self, rhs: &Self, sub: bool) -> Self {
        assert!(self.field == rhs.field, "field mismatch");
        let prec = self.prec.min(rhs.prec);
        let val = self.val.min(rhs.val).min(prec);
        let end = self.end().max(rhs.end()).min(prec).max(val);
        let coeffs = (val..end)
            .map(|k| {
                let a = self.coeff(k).expect("k < prec");
                let b = rhs.coeff(k).expect("k < prec");
                if sub {
                    &a - &b
                } else {
                    &a + &b
                }
            })
            .collect();
        Self::new(&self.field, val, coeffs, prec)
    }

    /// Inverse of a series with known nonzero leading term.
    pub fn inverse(&self) -> Result<Self> {
        let Some(v) = self.valuation() else {
            return Err(Error::DivisionByZero);
        };
        let rel = self.prec - v;
        if self.coeffs.len() == 1 {
            let c = self.coeffs[0].inverse()?;
            return Ok(Self::new(&self.field, -v, vec![c], -v + rel));
        }
        if rel > MAX_RELATIVE_PRECISION {
            return Err(Error::PrecisionExhausted {
                needed: MAX_RELATIVE_PRECISION,
                available: rel,
            });
        }
        let rel = rel as usize;
        let inv0 = self.coeffs[0].inverse()?;
        let mut inv = Vec::with_capacity(rel);
        inv.push(inv0.clone());
        for n in 1..rel {
            let mut acc = self.field.zero();
            for k in 1..=n.min(self.coeffs.len() - 1) {
                acc = &acc + &(&self.coeffs[k] * &inv[n - k]);
            }
            inv.push(-&(&acc * &inv0));
        }
        Ok(Self::new(&self.field, -v, inv, -v + rel as i64))
    }

    pub fn div(&self, rhs: &Self) -> Result<Self> {
        Ok(self * &rhs.inverse()?)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut result = Self::constant(self.field.one(), EXACT);
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

    /// `x^p`, computed coefficient-wise in characteristic `p`.
    pub fn frobenius(&self) -> Self {
        let p = self.field.characteristic() as i64;
        let mut coeffs = vec![self.field.zero(); self.coeffs.len() * p as usize];
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs[k * p as usize] = c.frobenius();
        }
        Self::new(&self.field, self.val.saturating_mul(p), coeffs, self.prec.saturating_mul(p))
    }

    /// `x^p - x`.
    pub fn wp(&self) -> Self {
        &self.frobenius() - self
    }
}

impl std::ops::Add for &LaurentSeries {
    type Output = LaurentSeries;
    fn add(self, rhs: &LaurentSeries) -> LaurentSeries {
        self.combine(rhs, false)
    }
}

impl std::ops::Sub for &LaurentSeries {
    type Output = LaurentSeries;
    fn sub(self, rhs: &LaurentSeries) -> LaurentSeries {
        self.combine(rhs, true)
    }
}

impl std::ops::Neg for &LaurentSeries {
    type Output = LaurentSeries;
    fn neg(self) -> LaurentSeries {
        LaurentSeries::new(&self.field, self.val, self.coeffs.iter().map(|c| -c).collect(), self.prec)
    }
}

impl std::ops::Mul for &LaurentSeries {
    type Output = LaurentSeries;
    fn mul(self, rhs: &LaurentSeries) -> LaurentSeries {
        assert!(self.field == rhs.field, "field mismatch");
        let prec = (self.prec.saturating_add(rhs.val)).min(rhs.prec.saturating_add(self.val));
        let val = self.val + rhs.val;
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return LaurentSeries::zero(&self.field, prec);
        }
        let n = (prec - val)
            .max(0)
            .min((self.coeffs.len() + rhs.coeffs.len() - 1) as i64) as usize;
        let mut coeffs = vec![self.field.zero(); n];
        for (i, a) in self.coeffs.iter().enumerate().take(n) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(n - i) {
                coeffs[i + j] = &coeffs[i + j] + &(a * b);
            }
        }
        LaurentSeries::new(&self.field, val, coeffs, prec)
    }
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, c) in self.terms() {
            let cs = c.to_string();
            let mono = match k {
                0 => String::new(),
                1 => "pi".to_string(),
                k => format!("pi^{k}"),
            };
            match (k, c.is_one()) {
                (0, _) => write!(f, "{cs}")?,
                (_, true) => write!(f, "{mono}")?,
                _ if cs.contains('+') => write!(f, "({cs})*{mono}")?,
                _ => write!(f, "{cs}*{mono}")?,
            }
            f.write_str(" + ")?;
        }
        write!(f, "O(pi^{})", self.prec)
    }
}

impl fmt::Debug for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Evaluates `sum f[k] X^k` at `x` by Horner's rule.
fn eval_series_poly(f: &[LaurentSeries], x: &LaurentSeries) -> LaurentSeries {
    let field = x.field();
    f.iter()
        .rev()
        .fold(LaurentSeries::zero(field, EXACT), |acc, c| &(&acc * x) + c)
}

/// Newton iteration for a simple root of `sum f[k] X^k` starting at `x0`.
///
/// Requires `v(f(x0)) > 2 v(f'(x0))`; the agreement order doubles at each step.
pub fn newton_lift_root(f: &[LaurentSeries], x0: &LaurentSeries, precision: i64) -> Result<LaurentSeries> {
    let field = x0.field().clone();
    let p = field.characteristic() as usize;
    let df: Vec<LaurentSeries> = f
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c.scale(&field.from_u32((k % p) as u32)))
        .collect();
    // the start is an approximation: treat its unknown tail as zero
    let x0 = &x0.extend_precision(precision);
    let fx = eval_series_poly(f, x0);
    let dfx = eval_series_poly(&df, x0);
    let Some(dv) = dfx.valuation() else {
        return Err(Error::HenselConditionFailed {
            value_order: fx.order(),
            derivative_order: dfx.order(),
        });
    };
    if fx.order() <= 2 * dv {
        return Err(Error::HenselConditionFailed {
            value_order: fx.order(),
            derivative_order: dv,
        });
    }
    let mut x = x0.clone();
    for _ in 0..64 {
        let fx = eval_series_poly(f, &x);
        if fx.order() >= precision {
            return Ok(x.truncate(precision));
        }
        let dfx = eval_series_poly(&df, &x);
        let dv = dfx.order().abs();
        let step = fx.div(&dfx.truncate(precision.saturating_add(2 * dv + 1)))?;
        if step.is_known_zero() {
            break;
        }
        x = (&x - &step).truncate(precision);
    }
    let fx = eval_series_poly(f, &x);
    if fx.order() >= precision {
        Ok(x.truncate(precision))
    } else {
        Err(Error::PrecisionExhausted {
            needed: precision,
            available: fx.order(),
        })
    }
}

/// The completion of k at a place: residue field, base-field embedding and the
/// image of `T` in κ(v)((π)).
#[derive(Clone)]
pub struct CompletionContext {
    place: Place,
    residue: FiniteField,
    /// Images in κ(v) of `1, w, ..., w^{m-1}`.
    base_images: Vec<FieldElement>,
    /// Residue class of `T` (finite places).
    t_residue: Option<FieldElement>,
    /// `T^j` for `j < deg a`, to `stored_precision` (finite places).
    t_powers: Vec<LaurentSeries>,
    stored_precision: i64,
}

impl CompletionContext {
    pub fn new(place: &Place) -> Result<Self> {
        Self::with_precision(place, DEFAULT_CONTEXT_PRECISION)
    }

    pub fn with_precision(place: &Place, precision: i64) -> Result<Self> {
        let base = place.base_field().clone();
        let m = base.degree();
        let identity = || {
            let mut powers = vec![base.one()];
            for _ in 1..m {
                let next = powers.last().unwrap() * &base.generator();
                powers.push(next);
            }
            powers
        };
        match place {
            Place::Infinity(_) => Ok(CompletionContext {
                place: place.clone(),
                residue: base.clone(),
                base_images: identity(),
                t_residue: None,
                t_powers: Vec::new(),
                stored_precision: precision,
            }),
            Place::Finite(a) if a.degree() == Some(1) => {
                let root = -&a.coeff(0);
                Ok(CompletionContext {
                    place: place.clone(),
                    residue: base.clone(),
                    base_images: identity(),
                    t_residue: Some(root.clone()),
                    t_powers: vec![LaurentSeries::constant(base.one(), precision)],
                    stored_precision: precision,
                })
            }
            Place::Finite(a) => {
                let d = a.degree().expect("nonzero");
                let residue = FiniteField::new(base.characteristic(), m * d)?;
                let gamma = if m == 1 {
                    residue.zero()
                } else {
                    let modulus = base
                        .modulus()
                        .map_coeffs(&residue, |c| residue.from_u32(c.coefficients().next().unwrap()));
                    modulus.roots().into_iter().next().expect("F_q embeds in the residue field")
                };
                let mut base_images = vec![residue.one()];
                for _ in 1..m {
                    let next = base_images.last().unwrap() * &gamma;
                    base_images.push(next);
                }
                let mut ctx = CompletionContext {
                    place: place.clone(),
                    residue,
                    base_images,
                    t_residue: None,
                    t_powers: Vec::new(),
                    stored_precision: precision,
                };
                let a_kappa = ctx.map_poly(a);
                let beta = a_kappa
                    .roots()
                    .into_iter()
                    .next()
                    .expect("irreducible of degree d splits in F_{q^d}");
                let t = ctx.lift_t(&a_kappa, &beta, precision)?;
                let mut powers = vec![LaurentSeries::constant(ctx.residue.one(), precision)];
                for _ in 1..d {
                    let next = powers.last().unwrap() * &t;
                    powers.push(next);
                }
                ctx.t_residue = Some(beta);
                ctx.t_powers = powers;
                Ok(ctx)
            }
        }
    }

    /// Newton lift of the root `beta` of `a(X) = π`.
    fn lift_t(&self, a_kappa: &Polynomial, beta: &FieldElement, precision: i64) -> Result<LaurentSeries> {
        let mut f: Vec<LaurentSeries> = a_kappa
            .coeffs()
            .iter()
            .map(|c| LaurentSeries::constant(c.clone(), precision))
            .collect();
        f[0] = &f[0] - &LaurentSeries::monomial(self.residue.one(), 1, precision);
        newton_lift_root(&f, &LaurentSeries::constant(beta.clone(), precision), precision)
    }

    pub fn place(&self) -> &Place {
        &self.place
    }

    pub fn residue_field(&self) -> &FiniteField {
        &self.residue
    }

    /// The embedding F_q -> κ(v).
    pub fn embed_base(&self, c: &FieldElement) -> FieldElement {
        c.coefficients()
            .zip(&self.base_images)
            .fold(self.residue.zero(), |acc, (k, img)| &acc + &img.scale_prime(k))
    }

    pub fn map_poly(&self, f: &Polynomial) -> Polynomial {
        f.map_coeffs(&self.residue, |c| self.embed_base(c))
    }

    /// `T` in κ(v)((π)) modulo `π^precision`.
    pub fn t_image(&self, precision: i64) -> Result<LaurentSeries> {
        match &self.place {
            Place::Infinity(_) => Ok(LaurentSeries::monomial(self.residue.one(), -1, precision)),
            Place::Finite(a) if a.degree() == Some(1) => {
                let beta = self.t_residue.clone().expect("finite place");
                Ok(LaurentSeries::new(&self.residue, 0, vec![beta, self.residue.one()], precision))
            }
            Place::Finite(a) => {
                if precision <= self.stored_precision {
                    return Ok(self.t_powers[1].truncate(precision));
                }
                let beta = self.t_residue.as_ref().expect("finite place");
                self.lift_t(&self.map_poly(a), beta, precision)
            }
        }
    }

    fn t_powers_to(&self, precision: i64) -> Result<Vec<LaurentSeries>> {
        if precision <= self.stored_precision {
            return Ok(self.t_powers.iter().map(|s| s.truncate(precision)).collect());
        }
        let t = self.t_image(precision)?;
        let mut powers = vec![LaurentSeries::constant(self.residue.one(), precision)];
        for _ in 1..self.t_powers.len() {
            let next = powers.last().unwrap() * &t;
            powers.push(next);
        }
        Ok(powers)
    }

    /// `f(T)` for a polynomial coprime to the place, modulo `π^precision` (finite places).
    fn embed_unit_poly(&self, f: &Polynomial, a: &Polynomial, precision: i64) -> Result<LaurentSeries> {
        let powers = self.t_powers_to(precision)?;
        let mut acc = LaurentSeries::zero(&self.residue, precision);
        for (k, digit) in adic_digits(f, a, Some(precision.max(0) as usize)).iter().enumerate() {
            let mut term = LaurentSeries::zero(&self.residue, precision);
            for (j, c) in digit.coeffs().iter().enumerate() {
                if c.is_nonzero() {
                    term = &term + &powers[j].scale(&self.embed_base(c));
                }
            }
            acc = &acc + &term.shift(k as i64).truncate(precision);
        }
        Ok(acc)
    }

    /// Expansion of `x` in κ(v)((π)) modulo `π^precision`; the leading exponent is `v(x)`.
    pub fn embed(&self, x: &RationalFunction, precision: i64) -> Result<LaurentSeries> {
        if x.is_zero() {
            return Ok(LaurentSeries::zero(&self.residue, precision));
        }
        let v = self.place.valuation(x).finite().expect("x is nonzero");
        let rel = precision - v;
        if rel < 1 {
            return Err(Error::PrecisionExhausted {
                needed: v + 1,
                available: precision,
            });
        }
        let unit = match &self.place {
            Place::Infinity(_) => {
                let rev = |f: &Polynomial| {
                    let coeffs: Vec<FieldElement> = f.coeffs().iter().rev().cloned().collect();
                    LaurentSeries::new(&self.residue, 0, coeffs, rel)
                };
                rev(x.numerator()).div(&rev(x.denominator()))?
            }
            Place::Finite(a) => {
                let strip = |f: &Polynomial| {
                    let mut f = f.clone();
                    loop {
                        let (q, r) = f.divmod(a).expect("a nonzero");
                        if !r.is_zero() {
                            return f;
                        }
                        f = q;
                    }
                };
                let num = self.embed_unit_poly(&strip(x.numerator()), a, rel)?;
                let den = self.embed_unit_poly(&strip(x.denominator()), a, rel)?;
                num.div(&den)?
            }
        };
        Ok(unit.shift(v))
    }

    /// Image of `x` in κ(v); fails when `x` has a pole at the place.
    pub fn residue_at(&self, x: &RationalFunction) -> Result<FieldElement> {
        match self.place.valuation(x) {
            Valuation::Infinite => Ok(self.residue.zero()),
            Valuation::Finite(v) if v < 0 => Err(Error::NotIntegralAtPlace(self.place.to_string())),
            Valuation::Finite(v) if v > 0 => Ok(self.residue.zero()),
            Valuation::Finite(_) => match &self.place {
                Place::Infinity(_) => x.numerator().leading_coeff().div(&x.denominator().leading_coeff()),
                Place::Finite(_) => {
                    let beta = self.t_residue.as_ref().expect("finite place");
                    let n = self.map_poly(x.numerator()).eval(beta);
                    let d = self.map_poly(x.denominator()).eval(beta);
                    n.div(&d)
                }
            },
        }
    }
}

impl FieldElement {
    /// Multiplication by the prime-field integer `k`.
    pub fn scale_prime(&self, k: u32) -> FieldElement {
        self * &self.field().from_u32(k)
    }
}

/// Convenience wrapper building a fresh context.
pub fn embed_at_place(x: &RationalFunction, place: &Place, precision: i64) -> Result<LaurentSeries> {
    CompletionContext::with_precision(place, precision.max(1))?.embed(x, precision)
}
