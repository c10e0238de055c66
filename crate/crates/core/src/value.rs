//! Ordered pay-off codomains.
//!
//! The engine only ever talks to a [`ValueLattice`]: a (possibly partial)
//! order in which every finite nonempty subset has a supremum and an
//! infimum. [`ValueDomain`] is the dynamic, file-backed realization with
//! adjoined infinities; [`Ordered`] turns any `Ord` scalar into a total
//! domain.

use std::cmp::Ordering;
use std::fmt;
use std::marker::PhantomData;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde_json::Value as Json;
use thiserror::Error;

use crate::lattice::{ElementId, FiniteLattice};

/// Result of comparing two values in a possibly partial order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Comparison {
    Less,
    Equal,
    Greater,
    Incomparable,
}

impl Comparison {
    pub fn reverse(self) -> Self {
        match self {
            Comparison::Less => Comparison::Greater,
            Comparison::Greater => Comparison::Less,
            c => c,
        }
    }

    pub fn is_le(self) -> bool {
        matches!(self, Comparison::Less | Comparison::Equal)
    }

    pub fn is_ge(self) -> bool {
        matches!(self, Comparison::Greater | Comparison::Equal)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Comparison::Less => "less",
            Comparison::Equal => "equal",
            Comparison::Greater => "greater",
            Comparison::Incomparable => "incomparable",
        }
    }
}

impl From<Ordering> for Comparison {
    fn from(o: Ordering) -> Self {
        match o {
            Ordering::Less => Comparison::Less,
            Ordering::Equal => Comparison::Equal,
            Ordering::Greater => Comparison::Greater,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValueError {
    #[error("value `{value}` does not belong to the {mode} domain")]
    ModeMismatch { value: String, mode: String },
    #[error("supremum or infimum of an empty set")]
    EmptySet,
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("cannot parse value `{0}`")]
    Parse(String),
}

/// An ordered set in which every finite nonempty subset has a supremum and
/// an infimum. This is the only interface the game engine needs from the
/// pay-off codomain.
pub trait ValueLattice: Clone {
    type Value: Clone + PartialEq + fmt::Debug;

    fn compare(&self, a: &Self::Value, b: &Self::Value) -> Comparison;
    fn join(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn meet(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;

    /// Whether every pair of values is comparable.
    fn is_total(&self) -> bool;

    /// The same values under the opposite order.
    fn reversed(&self) -> Self;

    /// Membership test used when a game is assembled.
    fn contains(&self, _v: &Self::Value) -> bool {
        true
    }

    /// Whether `v` is the greatest element of the domain, if it has one.
    fn is_greatest(&self, _v: &Self::Value) -> bool {
        false
    }

    /// Human-readable rendering.
    fn render(&self, v: &Self::Value) -> String {
        format!("{v:?}")
    }

    fn leq(&self, a: &Self::Value, b: &Self::Value) -> bool {
        self.compare(a, b).is_le()
    }

    fn lt(&self, a: &Self::Value, b: &Self::Value) -> bool {
        self.compare(a, b) == Comparison::Less
    }

    fn gt(&self, a: &Self::Value, b: &Self::Value) -> bool {
        self.compare(a, b) == Comparison::Greater
    }

    fn equal(&self, a: &Self::Value, b: &Self::Value) -> bool {
        self.compare(a, b) == Comparison::Equal
    }

    fn sup<'a, I>(&self, values: I) -> Result<Self::Value, ValueError>
    where
        I: IntoIterator<Item = &'a Self::Value>,
        Self::Value: 'a,
    {
        let mut it = values.into_iter();
        let first = it.next().ok_or(ValueError::EmptySet)?.clone();
        Ok(it.fold(first, |acc, v| self.join(&acc, v)))
    }

    fn inf<'a, I>(&self, values: I) -> Result<Self::Value, ValueError>
    where
        I: IntoIterator<Item = &'a Self::Value>,
        Self::Value: 'a,
    {
        let mut it = values.into_iter();
        let first = it.next().ok_or(ValueError::EmptySet)?.clone();
        Ok(it.fold(first, |acc, v| self.meet(&acc, v)))
    }
}

/// A scalar extended with a least and a greatest element.
///
/// The derived order puts `NegInfinity` below every `Finite` value and
/// `PosInfinity` above.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Extended<T> {
    NegInfinity,
    Finite(T),
    PosInfinity,
}

/// Maps a type to its greatest element, when it has one. Used by
/// [`Ordered`] to recognise `+∞`.
pub trait MaybeBounded {
    fn is_greatest_value(&self) -> bool {
        false
    }

    fn is_least_value(&self) -> bool {
        false
    }
}

impl<T> MaybeBounded for Extended<T> {
    fn is_greatest_value(&self) -> bool {
        matches!(self, Extended::PosInfinity)
    }

    fn is_least_value(&self) -> bool {
        matches!(self, Extended::NegInfinity)
    }
}

macro_rules! unbounded {
    ($($t:ty),*) => { $(impl MaybeBounded for $t {})* };
}
unbounded!(i8, i16, i32, i64, i128, u8, u16, u32, u64, u128, BigInt, BigRational);
unbounded!(num_rational::Rational32, num_rational::Rational64);

/// Total order given by `T: Ord`, optionally reversed.
pub struct Ordered<T> {
    reversed: bool,
    _marker: PhantomData<fn() -> T>,
}

impl<T> Ordered<T> {
    pub fn new() -> Self {
        Ordered { reversed: false, _marker: PhantomData }
    }

    pub fn is_reversed(&self) -> bool {
        self.reversed
    }
}

impl<T> Default for Ordered<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T> Clone for Ordered<T> {
    fn clone(&self) -> Self {
        Ordered { reversed: self.reversed, _marker: PhantomData }
    }
}

impl<T> fmt::Debug for Ordered<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Ordered").field("reversed", &self.reversed).finish()
    }
}

impl<T> PartialEq for Ordered<T> {
    fn eq(&self, other: &Self) -> bool {
        self.reversed == other.reversed
    }
}

impl<T: Ord + Clone + fmt::Debug + MaybeBounded> ValueLattice for Ordered<T> {
    type Value = T;

    fn compare(&self, a: &T, b: &T) -> Comparison {
        let c = Comparison::from(a.cmp(b));
        if self.reversed {
            c.reverse()
        } else {
            c
        }
    }

    fn join(&self, a: &T, b: &T) -> T {
        if self.compare(a, b).is_ge() { a.clone() } else { b.clone() }
    }

    fn meet(&self, a: &T, b: &T) -> T {
        if self.compare(a, b).is_le() { a.clone() } else { b.clone() }
    }

    fn is_total(&self) -> bool {
        true
    }

    fn reversed(&self) -> Self {
        Ordered { reversed: !self.reversed, _marker: PhantomData }
    }

    fn is_greatest(&self, v: &T) -> bool {
        if self.reversed { v.is_least_value() } else { v.is_greatest_value() }
    }
}

/// A finite set of primes, stored ascending.
///
/// Ordered by comparing the descending sequences lexicographically, with a
/// proper prefix counting as smaller. This total order extends inclusion and
/// agrees with numeric order on singletons.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct PrimeSet(Vec<u64>);

impl PrimeSet {
    pub fn new(primes: impl IntoIterator<Item = u64>) -> Result<Self, ValueError> {
        let mut v: Vec<u64> = primes.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        if let Some(&p) = v.iter().find(|&&p| !is_prime(p)) {
            return Err(ValueError::NotPrime(p));
        }
        Ok(PrimeSet(v))
    }

    /// Prime divisors of `n` (empty for `n = 1`).
    pub fn of_divisors(mut n: u64) -> Self {
        let mut out = Vec::new();
        let mut p = 2;
        while p * p <= n {
            if n % p == 0 {
                out.push(p);
                while n % p == 0 {
                    n /= p;
                }
            }
            p += 1;
        }
        if n > 1 {
            out.push(n);
        }
        PrimeSet(out)
    }

    pub fn primes(&self) -> &[u64] {
        &self.0
    }

    pub fn least(&self) -> Option<u64> {
        self.0.first().copied()
    }

    pub fn is_subset(&self, other: &PrimeSet) -> bool {
        self.0.iter().all(|p| other.0.binary_search(p).is_ok())
    }
}

impl Ord for PrimeSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.iter().rev().cmp(other.0.iter().rev())
    }
}

impl PartialOrd for PrimeSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PrimeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let inner: Vec<String> = self.0.iter().map(u64::to_string).collect();
        write!(f, "{{{}}}", inner.join(","))
    }
}

pub(crate) fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

/// A pay-off value of the dynamic domain.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Value {
    NegInfinity,
    PosInfinity,
    Rational(BigRational),
    /// Coordinates listed highest first.
    LexTuple(Vec<BigRational>),
    PrimeSet(PrimeSet),
    /// An element of a user-supplied value lattice.
    Point(ElementId),
}

impl Value {
    pub fn int(n: i64) -> Value {
        Value::Rational(BigRational::from_integer(n.into()))
    }

    pub fn ratio(p: i64, q: i64) -> Value {
        Value::Rational(BigRational::new(p.into(), q.into()))
    }

    pub fn primes(ps: &[u64]) -> Value {
        Value::PrimeSet(PrimeSet::new(ps.iter().copied()).expect("primes"))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Value::NegInfinity | Value::PosInfinity)
    }
}

/// Which kind of finite values a [`ValueDomain`] holds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DomainMode {
    ExtendedRational,
    LexTuple(usize),
    PrimeSet,
    FinitePoset(Arc<FiniteLattice>),
}

impl DomainMode {
    fn name(&self) -> &'static str {
        match self {
            DomainMode::ExtendedRational => "rational",
            DomainMode::LexTuple(_) => "lex_tuple",
            DomainMode::PrimeSet => "prime_set",
            DomainMode::FinitePoset(_) => "finite_poset",
        }
    }
}

/// The dynamic pay-off codomain: one of several finite-value modes, with
/// `-∞` and `+∞` adjoined, and an orientation flag used by game duality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValueDomain {
    mode: DomainMode,
    reversed: bool,
}

impl ValueDomain {
    pub fn new(mode: DomainMode) -> Self {
        ValueDomain { mode, reversed: false }
    }

    pub fn rational() -> Self {
        Self::new(DomainMode::ExtendedRational)
    }

    pub fn lex_tuple(len: usize) -> Self {
        Self::new(DomainMode::LexTuple(len))
    }

    pub fn prime_set() -> Self {
        Self::new(DomainMode::PrimeSet)
    }

    pub fn finite_poset(values: FiniteLattice) -> Self {
        Self::new(DomainMode::FinitePoset(Arc::new(values)))
    }

    pub fn mode(&self) -> &DomainMode {
        &self.mode
    }

    pub fn mode_name(&self) -> &'static str {
        self.mode.name()
    }

    pub fn is_reversed(&self) -> bool {
        self.reversed
    }

    pub fn with_reversed(mut self, reversed: bool) -> Self {
        self.reversed = reversed;
        self
    }

    /// A point of the value lattice, looked up by label.
    pub fn point(&self, label: &str) -> Option<Value> {
        match &self.mode {
            DomainMode::FinitePoset(l) => l.id(label).map(Value::Point),
            _ => None,
        }
    }

    fn mismatch(&self, v: &Value) -> ValueError {
        ValueError::ModeMismatch { value: format!("{v:?}"), mode: self.mode.name().into() }
    }

    fn check(&self, v: &Value) -> Result<(), ValueError> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(self.mismatch(v))
        }
    }

    /// Compares two values, rejecting values foreign to this domain.
    pub fn try_compare(&self, a: &Value, b: &Value) -> Result<Comparison, ValueError> {
        self.check(a)?;
        self.check(b)?;
        let base = self.base_compare(a, b);
        Ok(if self.reversed { base.reverse() } else { base })
    }

    fn base_compare(&self, a: &Value, b: &Value) -> Comparison {
        use Value::*;
        match (a, b) {
            (NegInfinity, NegInfinity) | (PosInfinity, PosInfinity) => Comparison::Equal,
            (NegInfinity, _) | (_, PosInfinity) => Comparison::Less,
            (_, NegInfinity) | (PosInfinity, _) => Comparison::Greater,
            (Rational(x), Rational(y)) => x.cmp(y).into(),
            (LexTuple(x), LexTuple(y)) => x.cmp(y).into(),
            (PrimeSet(x), PrimeSet(y)) => x.cmp(y).into(),
            (Point(x), Point(y)) => match &self.mode {
                DomainMode::FinitePoset(l) if x == y => Comparison::Equal,
                DomainMode::FinitePoset(l) if l.leq(*x, *y) => Comparison::Less,
                DomainMode::FinitePoset(l) if l.leq(*y, *x) => Comparison::Greater,
                _ => Comparison::Incomparable,
            },
            _ => unreachable!("values checked against the domain"),
        }
    }

    fn base_join(&self, a: &Value, b: &Value) -> Value {
        match (a, b, &self.mode) {
            (Value::Point(x), Value::Point(y), DomainMode::FinitePoset(l)) => Value::Point(l.join(*x, *y)),
            _ => {
                if self.base_compare(a, b).is_ge() { a.clone() } else { b.clone() }
            }
        }
    }

    fn base_meet(&self, a: &Value, b: &Value) -> Value {
        match (a, b, &self.mode) {
            (Value::Point(x), Value::Point(y), DomainMode::FinitePoset(l)) => Value::Point(l.meet(*x, *y)),
            _ => {
                if self.base_compare(a, b).is_le() { a.clone() } else { b.clone() }
            }
        }
    }

    /// Parses a value written in the game-file grammar.
    pub fn parse_value(&self, j: &Json) -> Result<Value, ValueError> {
        if let Json::String(s) = j {
            match s.trim() {
                "+inf" | "inf" => return Ok(Value::PosInfinity),
                "-inf" => return Ok(Value::NegInfinity),
                _ => {}
            }
        }
        let err = || ValueError::Parse(j.to_string());
        let v = match &self.mode {
            DomainMode::ExtendedRational => Value::Rational(parse_rational(j).ok_or_else(err)?),
            DomainMode::LexTuple(k) => {
                let arr = j.as_array().ok_or_else(err)?;
                let coords: Option<Vec<_>> = arr.iter().map(parse_rational).collect();
                let coords = coords.ok_or_else(err)?;
                if coords.len() != *k {
                    return Err(self.mismatch(&Value::LexTuple(coords)));
                }
                Value::LexTuple(coords)
            }
            DomainMode::PrimeSet => {
                let arr = j.as_array().ok_or_else(err)?;
                let ps: Option<Vec<u64>> = arr.iter().map(Json::as_u64).collect();
                Value::PrimeSet(PrimeSet::new(ps.ok_or_else(err)?)?)
            }
            DomainMode::FinitePoset(l) => {
                let label = j.as_str().ok_or_else(err)?;
                Value::Point(l.id(label).ok_or_else(err)?)
            }
        };
        Ok(v)
    }

    /// Writes a value in the game-file grammar.
    pub fn value_to_json(&self, v: &Value) -> Json {
        match v {
            Value::NegInfinity => Json::String("-inf".into()),
            Value::PosInfinity => Json::String("+inf".into()),
            Value::Rational(r) => Json::String(rational_string(r)),
            Value::LexTuple(c) => Json::Array(c.iter().map(|r| Json::String(rational_string(r))).collect()),
            Value::PrimeSet(p) => Json::Array(p.primes().iter().map(|&x| Json::from(x)).collect()),
            Value::Point(id) => match &self.mode {
                DomainMode::FinitePoset(l) => Json::String(l.label(*id).to_string()),
                _ => Json::String(format!("{id}")),
            },
        }
    }
}

impl ValueLattice for ValueDomain {
    type Value = Value;

    fn compare(&self, a: &Value, b: &Value) -> Comparison {
        self.try_compare(a, b).expect("value outside its domain")
    }

    fn join(&self, a: &Value, b: &Value) -> Value {
        if self.reversed { self.base_meet(a, b) } else { self.base_join(a, b) }
    }

    fn meet(&self, a: &Value, b: &Value) -> Value {
        if self.reversed { self.base_join(a, b) } else { self.base_meet(a, b) }
    }

    fn is_total(&self) -> bool {
        match &self.mode {
            DomainMode::FinitePoset(l) => l.elements().all(|x| l.elements().all(|y| l.comparable(x, y))),
            _ => true,
        }
    }

    fn reversed(&self) -> Self {
        ValueDomain { mode: self.mode.clone(), reversed: !self.reversed }
    }

    fn contains(&self, v: &Value) -> bool {
        match (v, &self.mode) {
            (Value::NegInfinity | Value::PosInfinity, _) => true,
            (Value::Rational(_), DomainMode::ExtendedRational) => true,
            (Value::LexTuple(c), DomainMode::LexTuple(k)) => c.len() == *k,
            (Value::PrimeSet(_), DomainMode::PrimeSet) => true,
            (Value::Point(id), DomainMode::FinitePoset(l)) => id.index() < l.len(),
            _ => false,
        }
    }

    fn is_greatest(&self, v: &Value) -> bool {
        let extreme = if self.reversed { Value::NegInfinity } else { Value::PosInfinity };
        *v == extreme
    }

    fn render(&self, v: &Value) -> String {
        match v {
            Value::NegInfinity => "-inf".into(),
            Value::PosInfinity => "+inf".into(),
            Value::Rational(r) => rational_string(r),
            Value::LexTuple(c) => {
                let parts: Vec<String> = c.iter().map(rational_string).collect();
                format!("({})", parts.join(", "))
            }
            Value::PrimeSet(p) => p.to_string(),
            Value::Point(id) => match &self.mode {
                DomainMode::FinitePoset(l) => l.label(*id).to_string(),
                _ => id.to_string(),
            },
        }
    }
}

/// Renders a rational as `p` or `p/q`.
pub fn rational_string(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `"p/q"`, `"p"` or a JSON integer.
pub fn parse_rational(j: &Json) -> Option<BigRational> {
    match j {
        Json::Number(n) => n.as_i64().map(|i| BigRational::from_integer(i.into())),
        Json::String(s) => parse_rational_str(s),
        _ => None,
    }
}

pub fn parse_rational_str(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                return None;
            }
            Some(BigRational::new(p, q))
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

/// Exact quotient `d / r` of a degree by a positive rank.
pub(crate) fn divide(d: &Value, r: &BigRational) -> Value {
    debug_assert!(r.is_positive());
    match d {
        Value::Rational(x) => Value::Rational(x / r),
        Value::LexTuple(c) => Value::LexTuple(c.iter().map(|x| x / r).collect()),
        other => other.clone(),
    }
}
