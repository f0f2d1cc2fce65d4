//! Artin–Schreier classes, ramification and local degrees of composita.
//!
//! For a place `v` with uniformizer `π`, every class of `k_v / ℘(k_v)` has a unique
//! representative `sum_{j>0, p∤j} c_j π^{-j} + c_0` with `c_0` taken modulo
//! `℘(κ(v))`, i.e. recorded by `Tr_{κ(v)/F_p}(c_0)`. The degree of the compositum
//! of `k_v(℘^{-1}(c_i))` is `p^r`, `r` the F_p-rank of those representatives.
//! Globally, the analogous representative is read off a partial fraction
//! decomposition.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, RwLock};

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::finite_field::{FieldElement, FiniteField};
use crate::linalg;
use crate::local::{CompletionContext, LaurentSeries};
use crate::poly::Polynomial;
use crate::rational::{adic_digits, Place, RationalFunction, Valuation};

/// Extra terms carried beyond the pole order during local reduction.
pub const DEFAULT_GUARD: i64 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Classification {
    Trivial,
    Unramified,
    Ramified { jump: u32 },
}

impl Classification {
    pub fn name(&self) -> &'static str {
        match self {
            Classification::Trivial => "Trivial",
            Classification::Unramified => "Unramified",
            Classification::Ramified { .. } => "Ramified",
        }
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Classification::Ramified { jump } => write!(f, "Ramified(jump {jump})"),
            other => f.write_str(other.name()),
        }
    }
}

/// The reduced class of `c` in `k_v / ℘(k_v)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ASClass {
    pub place: Place,
    pub residue_field: FiniteField,
    /// `j -> coefficient of π^{-j}`; every key is prime to `p`.
    pub ramified_part: BTreeMap<u32, FieldElement>,
    /// Constant term of the reduced representative.
    pub constant: FieldElement,
    /// `Tr_{κ(v)/F_p}` of the constant term.
    pub trace_part: u32,
}

impl ASClass {
    pub fn classification(&self) -> Classification {
        match self.ramified_part.keys().next_back() {
            Some(&jump) => Classification::Ramified { jump },
            None if self.trace_part != 0 => Classification::Unramified,
            None => Classification::Trivial,
        }
    }

    pub fn jump(&self) -> Option<u32> {
        self.ramified_part.keys().next_back().copied()
    }

    fn p(&self) -> u32 {
        self.residue_field.characteristic()
    }

    /// Ramification index of `k_v(θ)/k_v`.
    pub fn e(&self) -> u32 {
        if self.jump().is_some() {
            self.p()
        } else {
            1
        }
    }

    /// Residue degree of `k_v(θ)/k_v`.
    pub fn f(&self) -> u32 {
        match self.classification() {
            Classification::Unramified => self.p(),
            _ => 1,
        }
    }

    /// Valuation of a root θ, normalized so that `w|k = v`: `(numerator, denominator)`.
    pub fn root_valuation(&self) -> (i64, u32) {
        match self.jump() {
            Some(j) => (-(j as i64), self.p()),
            None => (0, 1),
        }
    }

    pub fn root_valuation_string(&self) -> String {
        match self.root_valuation() {
            (0, _) => "0".to_string(),
            (n, 1) => n.to_string(),
            (n, d) => format!("{n}/{d}"),
        }
    }

    /// F_p coordinates: for `j = max_exponent, ..., 1` with `p ∤ j`, the coefficient
    /// of `π^{-j}` over the power basis of κ(v); then the trace.
    pub fn coordinates(&self, max_exponent: u32) -> Vec<u32> {
        let p = self.p();
        let dim = self.residue_field.degree();
        let mut out = Vec::new();
        for j in (1..=max_exponent).rev().filter(|j| j % p != 0) {
            match self.ramified_part.get(&j) {
                Some(c) => out.extend(c.coefficients()),
                None => out.extend(std::iter::repeat_n(0, dim)),
            }
        }
        out.push(self.trace_part);
        out
    }

    /// The reduced representative as a series modulo `π^prec`.
    pub fn representative(&self, prec: i64) -> LaurentSeries {
        let mut acc = LaurentSeries::constant(self.constant.clone(), prec);
        for (&j, c) in &self.ramified_part {
            acc = &acc + &LaurentSeries::monomial(c.clone(), -(j as i64), prec);
        }
        acc
    }
}

impl Serialize for ASClass {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("ASClass", 8)?;
        st.serialize_field("place", &self.place.to_string())?;
        st.serialize_field("classification", self.classification().name())?;
        st.serialize_field("jump", &self.jump())?;
        st.serialize_field("e", &self.e())?;
        st.serialize_field("f", &self.f())?;
        st.serialize_field("root_valuation", &self.root_valuation_string())?;
        let ramified: Vec<(u32, String)> = self
            .ramified_part
            .iter()
            .rev()
            .map(|(j, c)| (*j, c.to_string()))
            .collect();
        st.serialize_field("ramified_part", &ramified)?;
        st.serialize_field("trace_part", &self.trace_part)?;
        st.end()
    }
}

/// Which truncated family a compositum comes from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "value")]
pub enum Family {
    /// `{a^{-i}}` over several `i`, fixed `a`.
    LambdaA(String),
    /// `{a^{-i}}` over several places, fixed `i`.
    LambdaI(u32),
    /// Mixed `(a, i)`.
    Lambda,
    Custom,
}

/// A finite list of generators `c_1, ..., c_n` of Artin–Schreier extensions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompositumSpec {
    pub generators: Vec<RationalFunction>,
    pub family: Family,
}

impl CompositumSpec {
    pub fn custom(generators: Vec<RationalFunction>) -> Self {
        CompositumSpec {
            generators,
            family: Family::Custom,
        }
    }

    /// `{a^{-i} : i in exponents}`.
    pub fn lambda_a(place: &Place, exponents: &[u32]) -> Result<Self> {
        let generators = exponents
            .iter()
            .map(|&i| place.uniformizer().powi(-(i as i64)))
            .collect::<Result<_>>()?;
        Ok(CompositumSpec {
            generators,
            family: Family::LambdaA(place.to_string()),
        })
    }

    /// `{a^{-i} : a in places}`.
    pub fn lambda_i(places: &[Place], i: u32) -> Result<Self> {
        let generators = places
            .iter()
            .map(|a| a.uniformizer().powi(-(i as i64)))
            .collect::<Result<_>>()?;
        Ok(CompositumSpec {
            generators,
            family: Family::LambdaI(i),
        })
    }

    /// `{a^{-i} : (a, i) in pairs}`.
    pub fn lambda(pairs: &[(Place, u32)]) -> Result<Self> {
        let generators = pairs
            .iter()
            .map(|(a, i)| a.uniformizer().powi(-(*i as i64)))
            .collect::<Result<_>>()?;
        Ok(CompositumSpec {
            generators,
            family: Family::Lambda,
        })
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }
}

/// Local degree of a compositum at one place.
#[derive(Debug, Clone, Serialize)]
pub struct LocalDegreeReport {
    pub place: Place,
    pub rank: usize,
    pub degree: u64,
    pub ramified_rank: usize,
    pub residue_rank: usize,
    pub e: u64,
    pub f: u64,
    pub classes: Vec<ASClass>,
    pub matrix: Vec<Vec<u32>>,
}

/// Reduces a series in κ(v)((π)) to its class representative.
pub fn reduce_series(series: &LaurentSeries, place: &Place) -> Result<ASClass> {
    let field = series.field().clone();
    let p = field.characteristic() as i64;
    if series.precision() < 1 {
        return Err(Error::PrecisionExhausted {
            needed: 1,
            available: series.precision(),
        });
    }
    let mut polar: BTreeMap<i64, FieldElement> = series
        .terms()
        .filter(|(k, _)| *k < 0)
        .map(|(k, c)| (k, c.clone()))
        .collect();
    // Kill the most negative exponent divisible by p: c π^{-mp} ≡ c^{1/p} π^{-m} mod ℘.
    while let Some((k, u)) = polar
        .iter()
        .find(|(k, c)| **k % p == 0 && c.is_nonzero())
        .map(|(k, c)| (*k, c.clone()))
    {
        polar.remove(&k);
        let root = u.frobenius_root();
        let slot = polar.entry(k / p).or_insert_with(|| field.zero());
        *slot = &*slot + &root;
    }
    let ramified_part = polar
        .into_iter()
        .filter(|(_, c)| c.is_nonzero())
        .map(|(k, c)| ((-k) as u32, c))
        .collect();
    let constant = series.coeff(0).expect("precision >= 1");
    Ok(ASClass {
        place: place.clone(),
        residue_field: field,
        ramified_part,
        trace_part: constant.trace_to_prime(),
        constant,
    })
}

fn trivial_class(ctx: &CompletionContext) -> ASClass {
    let field = ctx.residue_field().clone();
    ASClass {
        place: ctx.place().clone(),
        constant: field.zero(),
        residue_field: field,
        ramified_part: BTreeMap::new(),
        trace_part: 0,
    }
}

/// Working precision for reducing `c` with pole order `-v` and the given guard.
fn working_precision(v: i64, guard: i64) -> i64 {
    v + (-v).max(1) + guard
}

/// Class of `c` in `k_v / ℘(k_v)` using an existing completion context.
pub fn local_reduce_in(c: &RationalFunction, ctx: &CompletionContext, guard: i64) -> Result<ASClass> {
    let v = match ctx.place().valuation(c) {
        Valuation::Infinite => return Ok(trivial_class(ctx)),
        Valuation::Finite(v) if v >= 1 => return Ok(trivial_class(ctx)),
        Valuation::Finite(v) => v,
    };
    let attempt = |guard: i64| -> Result<ASClass> {
        let series = ctx.embed(c, working_precision(v, guard))?;
        reduce_series(&series, ctx.place())
    };
    match attempt(guard.max(1)) {
        Err(Error::PrecisionExhausted { .. }) => attempt(2 * guard.max(1)),
        other => other,
    }
}

/// Class of `c` at `place`, building a fresh completion context.
pub fn local_reduce(c: &RationalFunction, place: &Place, guard: i64) -> Result<ASClass> {
    local_reduce_in(c, &CompletionContext::new(place)?, guard)
}

/// Rank report from already reduced classes at one place.
pub fn rank_report(place: &Place, classes: Vec<ASClass>, residue_field: &FiniteField) -> LocalDegreeReport {
    let p = residue_field.characteristic();
    let max_j = classes.iter().filter_map(ASClass::jump).max().unwrap_or(0);
    let matrix: Vec<Vec<u32>> = classes.iter().map(|c| c.coordinates(max_j)).collect();
    let rank = linalg::rank(&matrix, p);
    let ramified: Vec<Vec<u32>> = matrix.iter().map(|row| row[..row.len() - 1].to_vec()).collect();
    let ramified_rank = linalg::rank(&ramified, p);
    let residue_rank = rank - ramified_rank;
    let pow = |r: usize| (p as u64).pow(r as u32);
    LocalDegreeReport {
        place: place.clone(),
        rank,
        degree: pow(rank),
        ramified_rank,
        residue_rank,
        e: pow(ramified_rank),
        f: pow(residue_rank),
        classes,
        matrix,
    }
}

/// Caches completion contexts per place; all engine queries go through it.
pub struct Engine {
    field: FiniteField,
    guard: i64,
    contexts: RwLock<HashMap<Place, Arc<CompletionContext>>>,
}

impl Engine {
    pub fn new(field: &FiniteField) -> Self {
        Self::with_guard(field, DEFAULT_GUARD)
    }

    pub fn with_guard(field: &FiniteField, guard: i64) -> Self {
        Engine {
            field: field.clone(),
            guard,
            contexts: RwLock::new(HashMap::new()),
        }
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn guard(&self) -> i64 {
        self.guard
    }

    /// A copy with a different guard, seeded with the current context cache.
    pub fn clone_with_guard(&self, guard: i64) -> Self {
        let contexts = self.contexts.read().expect("context cache poisoned").clone();
        Engine {
            field: self.field.clone(),
            guard,
            contexts: RwLock::new(contexts),
        }
    }

    pub fn context(&self, place: &Place) -> Result<Arc<CompletionContext>> {
        if let Some(ctx) = self.contexts.read().expect("context cache poisoned").get(place) {
            return Ok(ctx.clone());
        }
        let ctx = Arc::new(CompletionContext::new(place)?);
        let mut cache = self.contexts.write().expect("context cache poisoned");
        Ok(cache.entry(place.clone()).or_insert(ctx).clone())
    }

    pub fn local_reduce(&self, c: &RationalFunction, place: &Place) -> Result<ASClass> {
        local_reduce_in(c, &*self.context(place)?, self.guard)
    }

    pub fn local_rank_and_degree(&self, spec: &CompositumSpec, place: &Place) -> Result<LocalDegreeReport> {
        let ctx = self.context(place)?;
        let classes = spec
            .generators
            .iter()
            .map(|c| local_reduce_in(c, &ctx, self.guard))
            .collect::<Result<Vec<_>>>()?;
        Ok(rank_report(place, classes, ctx.residue_field()))
    }

    /// Places where `c` generates a ramified extension; only poles need checking.
    pub fn ramification_locus(&self, c: &RationalFunction) -> Result<Vec<Place>> {
        let mut locus = Vec::new();
        for place in pole_places(c)? {
            if self.local_reduce(c, &place)?.jump().is_some() {
                locus.push(place);
            }
        }
        Ok(locus)
    }

    /// Frobenius at an unramified place, as the tuple of traces in F_p^n.
    pub fn frobenius(&self, spec: &CompositumSpec, place: &Place) -> Result<Vec<u32>> {
        spec.generators
            .iter()
            .map(|c| {
                let class = self.local_reduce(c, place)?;
                if class.jump().is_some() {
                    return Err(Error::RamifiedPlaceForFrobenius(place.to_string()));
                }
                Ok(class.trace_part)
            })
            .collect()
    }
}

/// Poles of `c`, in place order.
pub fn pole_places(c: &RationalFunction) -> Result<Vec<Place>> {
    let mut places = Vec::new();
    if c.numerator().deg() > c.denominator().deg() {
        places.push(Place::infinity(c.field()));
    }
    if !c.denominator().is_one() {
        for (a, _) in c.denominator().factor()?.factors {
            places.push(Place::Finite(a));
        }
    }
    places.sort();
    Ok(places)
}

/// Class of `c` in `k / ℘(k)`: reduced principal parts per pole and the constant trace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GlobalASForm {
    /// Per place, `j -> h_j` (a residue polynomial of degree `< deg a`; constants at infinity).
    pub parts: BTreeMap<Place, BTreeMap<u32, Polynomial>>,
    pub constant_trace: u32,
}

impl GlobalASForm {
    pub fn is_zero(&self) -> bool {
        self.parts.is_empty() && self.constant_trace == 0
    }

    pub fn max_exponent(&self, place: &Place) -> Option<u32> {
        self.parts.get(place).and_then(|m| m.keys().next_back().copied())
    }
}

/// `h^{1/p}` in `F_q[T]/(a)`.
fn frobenius_root_mod(h: &Polynomial, a: &Polynomial) -> Polynomial {
    let p = a.field().characteristic() as u64;
    let size = a.field().order().pow(a.degree().expect("nonzero") as u32);
    h.powmod(size / p, a)
}

/// Exact reduction of `c` modulo `℘(k)` via partial fractions.
pub fn global_reduce(c: &RationalFunction) -> GlobalASForm {
    let field = c.field().clone();
    let p = field.characteristic() as usize;
    let pf = c.partial_fractions();
    let mut parts = BTreeMap::new();
    for (place, digits) in pf.principal_parts {
        let a = place.polynomial().expect("finite place").clone();
        // h[m] for m = 0..=e, h[0] unused
        let mut h: Vec<Polynomial> = std::iter::once(Polynomial::zero(&field)).chain(digits).collect();
        while let Some(m) = (1..h.len()).rev().find(|&m| m % p == 0 && !h[m].is_zero()) {
            // subtract ℘(g / a^{m/p}) = g^p / a^m - g / a^{m/p}
            let g = frobenius_root_mod(&h[m], &a);
            let gp = g.pow(p as u64);
            for (k, u) in adic_digits(&gp, &a, None).into_iter().enumerate() {
                h[m - k] = &h[m - k] - &u;
            }
            h[m / p] = &h[m / p] + &g;
        }
        let reduced: BTreeMap<u32, Polynomial> = h
            .into_iter()
            .enumerate()
            .skip(1)
            .filter(|(_, hm)| !hm.is_zero())
            .map(|(m, hm)| (m as u32, hm))
            .collect();
        if !reduced.is_empty() {
            parts.insert(place, reduced);
        }
    }
    let mut poly: Vec<FieldElement> = pf.polynomial_part.coeffs().to_vec();
    while let Some(n) = (1..poly.len()).rev().find(|&n| n % p == 0 && poly[n].is_nonzero()) {
        // subtract ℘(s T^{n/p}) = s^p T^n - s T^{n/p}
        let s = poly[n].frobenius_root();
        poly[n] = field.zero();
        poly[n / p] = &poly[n / p] + &s;
    }
    let at_infinity: BTreeMap<u32, Polynomial> = poly
        .iter()
        .enumerate()
        .skip(1)
        .filter(|(_, c)| c.is_nonzero())
        .map(|(n, c)| (n as u32, Polynomial::constant(&field, c.clone())))
        .collect();
    if !at_infinity.is_empty() {
        parts.insert(Place::infinity(&field), at_infinity);
    }
    let constant_trace = poly.first().map_or(0, FieldElement::trace_to_prime);
    GlobalASForm {
        parts,
        constant_trace,
    }
}

/// Global rank and degree `p^rank` of the compositum over k.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GlobalDegree {
    pub rank: usize,
    pub degree: u64,
}

/// F_p coordinates of global forms, columns ordered by (place, exponent descending, basis index), trace last.
pub fn global_coordinates(forms: &[GlobalASForm]) -> Vec<Vec<u32>> {
    let mut columns: BTreeMap<Place, u32> = BTreeMap::new();
    for form in forms {
        for (place, part) in &form.parts {
            let top = *part.keys().next_back().expect("nonempty part");
            let slot = columns.entry(place.clone()).or_insert(0);
            *slot = (*slot).max(top);
        }
    }
    forms
        .iter()
        .map(|form| {
            let mut row = Vec::new();
            for (place, &max_j) in &columns {
                let d = place.degree();
                let m = place.base_field().degree();
                let p = place.base_field().characteristic();
                for j in (1..=max_j).rev().filter(|j| j % p != 0) {
                    let h = form.parts.get(place).and_then(|part| part.get(&j));
                    for t in 0..d {
                        match h {
                            Some(h) => row.extend(h.coeff(t).coefficients()),
                            None => row.extend(std::iter::repeat_n(0, m)),
                        }
                    }
                }
            }
            row.push(form.constant_trace);
            row
        })
        .collect()
}

pub fn global_rank_and_degree(spec: &CompositumSpec) -> GlobalDegree {
    let Some(first) = spec.generators.first() else {
        return GlobalDegree { rank: 0, degree: 1 };
    };
    let p = first.field().characteristic();
    let forms: Vec<GlobalASForm> = spec.generators.iter().map(global_reduce).collect();
    let rank = linalg::rank(&global_coordinates(&forms), p);
    GlobalDegree {
        rank,
        degree: (p as u64).pow(rank as u32),
    }
}
