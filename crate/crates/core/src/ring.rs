//! Exact arithmetic in the truncated quotient ring
//! `Λ[g_1,…,g_m] / (g_i·g_j, g_i^d − g_j^d, g_j^{d+1})` with `i ≠ j`.
//!
//! The relations make every element a constant plus one univariate
//! coefficient band per generator: cross monomials vanish, degrees above `d`
//! vanish, and the degree-`d` powers of all generators are the same ring
//! class. Elements are stored in that banded form, keeping the degree-`d`
//! coefficient of each generator separately; ring-level equality, hashing and
//! serialization coalesce those shares into the single `top` coefficient,
//! while [`TruncatedClass::restrict_to_generator`] and
//! [`TruncatedClass::coefficient_of`] at degree `d` expose the per-generator
//! share, which is what per-summand contribution arguments read off.
//!
//! Coefficients are exact: [`num_bigint::BigInt`] or
//! [`num_rational::BigRational`], selected by the type parameter. Mixing the
//! two domains is a type error; promotion is an explicit conversion.

use std::collections::BTreeMap;
use std::fmt::{self, Debug, Display};
use std::hash::{Hash, Hasher};
use std::ops::{Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::univariate;

/// Coefficient domain of a [`TruncatedClass`]: exact integers or exact
/// rationals. The unit group differs (±1 versus all nonzero), which is what
/// [`Scalar::inverse`] encodes.
pub trait Scalar:
    Clone
    + Eq
    + Hash
    + Debug
    + Display
    + Zero
    + One
    + Neg<Output = Self>
    + Sub<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// Multiplicative inverse, if this scalar is a unit of the domain.
    fn inverse(&self) -> Option<Self>;

    /// Embeds an integer into the domain.
    fn from_bigint(value: BigInt) -> Self;
}

impl Scalar for BigInt {
    fn inverse(&self) -> Option<Self> {
        if self.is_one() || (-self).is_one() {
            Some(self.clone())
        } else {
            None
        }
    }

    fn from_bigint(value: BigInt) -> Self {
        value
    }
}

impl Scalar for BigRational {
    fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn from_bigint(value: BigInt) -> Self {
        BigRational::from_integer(value)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("invalid ring parameters m={m}, d={d}: both must be at least 1")]
    InvalidSpec { m: u32, d: u32 },
    #[error("ring spec mismatch: (m={}, d={}) vs (m={}, d={})", .0.m, .0.d, .1.m, .1.d)]
    SpecMismatch(RingSpec, RingSpec),
    #[error("generator index {j} out of range 1..={m}")]
    GeneratorOutOfRange { j: u32, m: u32 },
    #[error("degree {k} out of range 0..={d}")]
    DegreeOutOfRange { k: u32, d: u32 },
    #[error("element with constant term {c0} is not a unit in its coefficient domain")]
    NotAUnit { c0: String },
    #[error("invalid substitution: {0}")]
    InvalidSubstitution(String),
}

/// Parameters of one quotient-ring instance: `m` generators, truncated so
/// that the generators are nilpotent of order `d + 1` and all degree-`d`
/// powers coincide. Elements are comparable only under identical specs; the
/// coefficient domain is carried by the element type parameter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RingSpec {
    m: u32,
    d: u32,
}

impl RingSpec {
    pub fn new(m: u32, d: u32) -> Result<Self, RingError> {
        if m == 0 || d == 0 {
            return Err(RingError::InvalidSpec { m, d });
        }
        Ok(RingSpec { m, d })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Top degree; `g_j^{d}` is the shared top class and `g_j^{d+1} = 0`.
    pub fn d(&self) -> u32 {
        self.d
    }
}

/// Canonical-form element of the truncated quotient ring.
///
/// Stored as the constant `c0` plus a sparse map `(j, k) -> coefficient`
/// over `1 ≤ j ≤ m`, `1 ≤ k ≤ d` with no zero entries. Keys with `k = d`
/// are the per-generator shares of the common top class; their sum is the
/// ring-level top coefficient returned by [`TruncatedClass::top`], and
/// equality compares that sum, not the individual shares.
#[derive(Clone, Debug)]
pub struct TruncatedClass<S: Scalar> {
    spec: RingSpec,
    c0: S,
    terms: BTreeMap<(u32, u32), S>,
}

impl<S: Scalar> TruncatedClass<S> {
    pub fn zero(spec: RingSpec) -> Self {
        TruncatedClass {
            spec,
            c0: S::zero(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(spec: RingSpec) -> Self {
        Self::constant(spec, S::one())
    }

    pub fn constant(spec: RingSpec, value: S) -> Self {
        TruncatedClass {
            spec,
            c0: value,
            terms: BTreeMap::new(),
        }
    }

    /// The degree-1 class of generator `j` (1-based). For `d = 1` that class
    /// is already the shared top class.
    pub fn generator(spec: RingSpec, j: u32) -> Result<Self, RingError> {
        if j == 0 || j > spec.m {
            return Err(RingError::GeneratorOutOfRange { j, m: spec.m });
        }
        let mut terms = BTreeMap::new();
        terms.insert((j, 1), S::one());
        Ok(TruncatedClass {
            spec,
            c0: S::zero(),
            terms,
        })
    }

    pub fn spec(&self) -> RingSpec {
        self.spec
    }

    pub fn c0(&self) -> &S {
        &self.c0
    }

    /// Coefficient of the shared top class `g_1^d = … = g_m^d`: the sum of
    /// the per-generator degree-`d` shares.
    pub fn top(&self) -> S {
        let d = self.spec.d;
        self.terms
            .iter()
            .filter(|(&(_, k), _)| k == d)
            .fold(S::zero(), |acc, (_, v)| acc + v.clone())
    }

    pub fn is_zero(&self) -> bool {
        *self == Self::zero(self.spec)
    }

    fn ensure_same_spec(&self, other: &Self) -> Result<(), RingError> {
        if self.spec != other.spec {
            return Err(RingError::SpecMismatch(self.spec, other.spec));
        }
        Ok(())
    }

    fn add_term(&mut self, key: (u32, u32), value: S) {
        if value.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(value);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().clone() + value;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    /// Coefficientwise sum.
    pub fn add(&self, other: &Self) -> Result<Self, RingError> {
        self.ensure_same_spec(other)?;
        let mut out = self.clone();
        out.c0 = out.c0 + other.c0.clone();
        for (&key, value) in &other.terms {
            out.add_term(key, value.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        out.c0 = -out.c0;
        for value in out.terms.values_mut() {
            *value = -value.clone();
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Result<Self, RingError> {
        self.add(&other.neg())
    }

    pub fn scalar_mul(&self, s: &S) -> Self {
        if s.is_zero() {
            return Self::zero(self.spec);
        }
        let mut out = Self::zero(self.spec);
        out.c0 = self.c0.clone() * s.clone();
        for (&key, value) in &self.terms {
            out.add_term(key, value.clone() * s.clone());
        }
        out
    }

    /// Distributive product with the quotient reductions applied:
    /// cross-generator monomials vanish, degrees above `d` vanish.
    pub fn mul(&self, other: &Self) -> Result<Self, RingError> {
        self.ensure_same_spec(other)?;
        let d = self.spec.d;
        let mut out = Self::zero(self.spec);
        out.c0 = self.c0.clone() * other.c0.clone();
        if !other.c0.is_zero() {
            for (&key, value) in &self.terms {
                out.add_term(key, value.clone() * other.c0.clone());
            }
        }
        if !self.c0.is_zero() {
            for (&key, value) in &other.terms {
                out.add_term(key, value.clone() * self.c0.clone());
            }
        }
        for (&(j1, k1), v1) in &self.terms {
            for (&(j2, k2), v2) in &other.terms {
                if j1 == j2 && k1 + k2 <= d {
                    out.add_term((j1, k1 + k2), v1.clone() * v2.clone());
                }
            }
        }
        Ok(out)
    }

    /// `self^e` by repeated squaring. `e = 0` yields 1; negative exponents
    /// require a unit base and go through [`TruncatedClass::invert_unit`].
    pub fn pow_int(&self, e: i64) -> Result<Self, RingError> {
        if e == 0 {
            return Ok(Self::one(self.spec));
        }
        let base = if e < 0 {
            self.invert_unit()?
        } else {
            self.clone()
        };
        let mut exp = e.unsigned_abs();
        let mut acc = Self::one(self.spec);
        let mut sq = base;
        loop {
            if exp & 1 == 1 {
                acc = acc.mul(&sq)?;
            }
            exp >>= 1;
            if exp == 0 {
                break;
            }
            sq = sq.mul(&sq)?;
        }
        Ok(acc)
    }

    /// Exact multiplicative inverse of a unit `c0 + nilpotent`: the finite
    /// geometric series in the nilpotent part, which terminates after `d`
    /// steps.
    pub fn invert_unit(&self) -> Result<Self, RingError> {
        let u = self.c0.inverse().ok_or_else(|| RingError::NotAUnit {
            c0: self.c0.to_string(),
        })?;
        let mut nilpotent = self.clone();
        nilpotent.c0 = S::zero();
        // -u * N, so that (c0 + N)^{-1} = u * sum_i (-u N)^i
        let minus_un = nilpotent.scalar_mul(&u).neg();
        let mut series = Self::one(self.spec);
        let mut power = Self::one(self.spec);
        for _ in 0..self.spec.d {
            power = power.mul(&minus_un).expect("same spec");
            if power.is_zero() {
                break;
            }
            series = series.add(&power).expect("same spec");
        }
        Ok(series.scalar_mul(&u))
    }

    /// Reads one coefficient: `c0` for `k = 0`, the `(j, k)` band entry for
    /// `1 ≤ k < d`, and the generator-`j` share of the top class for `k = d`
    /// (the coalesced value is [`TruncatedClass::top`]).
    pub fn coefficient_of(&self, j: u32, k: u32) -> Result<S, RingError> {
        if j == 0 || j > self.spec.m {
            return Err(RingError::GeneratorOutOfRange { j, m: self.spec.m });
        }
        if k > self.spec.d {
            return Err(RingError::DegreeOutOfRange { k, d: self.spec.d });
        }
        if k == 0 {
            return Ok(self.c0.clone());
        }
        Ok(self.terms.get(&(j, k)).cloned().unwrap_or_else(S::zero))
    }

    /// The univariate truncated series of generator `j`: every other
    /// generator is sent to 0. Returns the `d + 1` coefficients of degrees
    /// `0..=d`; the degree-`d` entry is generator `j`'s share of the top
    /// class, so the shares over all `j` sum to [`TruncatedClass::top`].
    pub fn restrict_to_generator(&self, j: u32) -> Result<Vec<S>, RingError> {
        if j == 0 || j > self.spec.m {
            return Err(RingError::GeneratorOutOfRange { j, m: self.spec.m });
        }
        let d = self.spec.d as usize;
        let mut out = vec![S::zero(); d + 1];
        out[0] = self.c0.clone();
        for (&(jj, k), value) in self.terms.range((j, 1)..=(j, self.spec.d)) {
            debug_assert_eq!(jj, j);
            out[k as usize] = value.clone();
        }
        Ok(out)
    }

    /// The degree-`k` part of the element (degree-`d` parts keep their
    /// per-generator shares).
    pub fn homogeneous_component(&self, k: u32) -> Result<Self, RingError> {
        if k > self.spec.d {
            return Err(RingError::DegreeOutOfRange { k, d: self.spec.d });
        }
        if k == 0 {
            return Ok(Self::constant(self.spec, self.c0.clone()));
        }
        let mut out = Self::zero(self.spec);
        for (&(j, kk), value) in &self.terms {
            if kk == k {
                out.add_term((j, kk), value.clone());
            }
        }
        Ok(out)
    }

    /// Applies the ring homomorphism determined by `g_j -> images[j-1]`,
    /// where each image is a univariate series in the same generator with
    /// zero constant term, given as its `d + 1` coefficients. The scalar
    /// domain may change; `lift` embeds the source coefficients.
    pub fn substitute<T: Scalar>(
        &self,
        images: &[Vec<T>],
        lift: impl Fn(&S) -> T,
    ) -> Result<TruncatedClass<T>, RingError> {
        let m = self.spec.m as usize;
        let d = self.spec.d;
        if images.len() != m {
            return Err(RingError::InvalidSubstitution(format!(
                "expected {m} generator images, got {}",
                images.len()
            )));
        }
        for (idx, image) in images.iter().enumerate() {
            if image.len() != d as usize + 1 {
                return Err(RingError::InvalidSubstitution(format!(
                    "image of generator {} has {} coefficients, expected {}",
                    idx + 1,
                    image.len(),
                    d + 1
                )));
            }
            if !image[0].is_zero() {
                return Err(RingError::InvalidSubstitution(format!(
                    "image of generator {} has nonzero constant term; substitution is defined \
                     only for nilpotent images",
                    idx + 1
                )));
            }
        }
        let mut out = TruncatedClass::constant(self.spec, lift(&self.c0));
        for j in 1..=self.spec.m {
            let band: Vec<(u32, &S)> = self
                .terms
                .range((j, 1)..=(j, d))
                .map(|(&(_, k), v)| (k, v))
                .collect();
            let Some(&(max_k, _)) = band.last() else {
                continue;
            };
            let image = &images[(j - 1) as usize];
            let mut power = image.clone();
            let mut band_iter = band.into_iter().peekable();
            for k in 1..=max_k {
                if let Some(&(bk, coeff)) = band_iter.peek() {
                    if bk == k {
                        band_iter.next();
                        let c = lift(coeff);
                        for (deg, p) in power.iter().enumerate().skip(1) {
                            if !p.is_zero() {
                                out.add_term((j, deg as u32), c.clone() * p.clone());
                            }
                        }
                    }
                }
                if k < max_k {
                    power = univariate::mul(&power, image);
                }
            }
        }
        Ok(out)
    }

    fn lower_entries(&self) -> impl Iterator<Item = (&(u32, u32), &S)> {
        let d = self.spec.d;
        self.terms.iter().filter(move |(&(_, k), _)| k < d)
    }
}

impl TruncatedClass<BigInt> {
    /// Explicit promotion into the rational-coefficient ring of the same
    /// shape.
    pub fn to_rational(&self) -> TruncatedClass<BigRational> {
        let mut out =
            TruncatedClass::constant(self.spec, BigRational::from_integer(self.c0.clone()));
        for (&key, value) in &self.terms {
            out.add_term(key, BigRational::from_integer(value.clone()));
        }
        out
    }
}

impl TruncatedClass<BigRational> {
    /// Demotes to integer coefficients if every stored coefficient is an
    /// integer; `None` otherwise.
    pub fn to_integer(&self) -> Option<TruncatedClass<BigInt>> {
        if !self.c0.is_integer() {
            return None;
        }
        let mut out = TruncatedClass::constant(self.spec, self.c0.to_integer());
        for (&key, value) in &self.terms {
            if !value.is_integer() {
                return None;
            }
            out.add_term(key, value.to_integer());
        }
        Some(out)
    }
}

// Equality is ring equality: the per-generator degree-d shares are compared
// through their sum.
impl<S: Scalar> PartialEq for TruncatedClass<S> {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec
            && self.c0 == other.c0
            && self.lower_entries().eq(other.lower_entries())
            && self.top() == other.top()
    }
}

impl<S: Scalar> Eq for TruncatedClass<S> {}

impl<S: Scalar> Hash for TruncatedClass<S> {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.spec.hash(state);
        self.c0.hash(state);
        for (key, value) in self.lower_entries() {
            key.hash(state);
            value.hash(state);
        }
        self.top().hash(state);
    }
}

impl<S: Scalar> Display for TruncatedClass<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if !self.c0.is_zero() {
            parts.push(self.c0.to_string());
        }
        for (&(j, k), value) in self.lower_entries() {
            let var = if k == 1 {
                format!("x{j}")
            } else {
                format!("x{j}^{k}")
            };
            parts.push(format!("{value}*{var}"));
        }
        let top = self.top();
        if !top.is_zero() {
            let var = if self.spec.m == 1 {
                format!("x1^{}", self.spec.d)
            } else {
                "T".to_string()
            };
            parts.push(format!("{top}*{var}"));
        }
        if parts.is_empty() {
            return write!(f, "0");
        }
        let mut joined = String::new();
        for (i, p) in parts.iter().enumerate() {
            if i == 0 {
                joined.push_str(p);
            } else if let Some(rest) = p.strip_prefix('-') {
                joined.push_str(" - ");
                joined.push_str(rest);
            } else {
                joined.push_str(" + ");
                joined.push_str(p);
            }
        }
        write!(f, "{joined}")
    }
}

// Report form: c0, the (j, k, coefficient) triples of degrees below d in
// (j, k) order, and the coalesced top coefficient, all scalars as strings.
impl<S: Scalar> Serialize for TruncatedClass<S> {
    fn serialize<Ser: Serializer>(&self, serializer: Ser) -> Result<Ser::Ok, Ser::Error> {
        let terms: Vec<(u32, u32, String)> = self
            .lower_entries()
            .map(|(&(j, k), v)| (j, k, v.to_string()))
            .collect();
        let mut s = serializer.serialize_struct("TruncatedClass", 5)?;
        s.serialize_field("m", &self.spec.m)?;
        s.serialize_field("d", &self.spec.d)?;
        s.serialize_field("c0", &self.c0.to_string())?;
        s.serialize_field("terms", &terms)?;
        s.serialize_field("top", &self.top().to_string())?;
        s.end()
    }
}
