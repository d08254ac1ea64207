//! The complex K-theory layer over the quotient ring: eta classes and their
//! conjugates, the named basis elements, the kernel of realification, and the
//! coefficient family parameterizing stable almost complex structures.
//!
//! The reduced K-ring of the m-fold connected sum of CP^{2n} is the integer
//! quotient ring of [`crate::ring`] with top degree `d = 2n`, generated by
//! the classes `η_j = p_j^*(H) - 1` of the pulled-back tautological line
//! bundles. Conjugation acts by `η ↦ -η/(1+η)`; the kernel of the
//! realification map is a free lattice of rank `m·n` with an explicit basis,
//! and adding that lattice to the stable tangent class `(2n+1)·Σ η̄_j`
//! enumerates all stable almost complex structures.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ring::{RingSpec, TruncatedClass};

/// Element of the integer K-ring (or of the integral cohomology ring; both
/// live in the same quotient ring shape).
pub type KClass = TruncatedClass<BigInt>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KError {
    #[error("invalid K-theory parameters m={m}, n={n}: both must be at least 1")]
    InvalidSpec { m: u32, n: u32 },
    #[error("basis key out of range: {0}")]
    BasisKeyOutOfRange(String),
}

/// Shape violations of a coefficient vector. The admissible index set of the
/// `a` and `b` coefficients depends on the parity of `n`, and vectors with
/// entries outside that set are rejected rather than zero-filled.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShapeError {
    #[error("invalid parameters m={m}, n={n}: both must be at least 1")]
    InvalidParams { m: u32, n: u32 },
    #[error(
        "coefficient a[j={j},k={k}] is outside the shape for m={m}, n={n} \
         ({} n admits {})", if n % 2 == 0 { "even" } else { "odd" },
        if n % 2 == 0 { "k=1..n-1 for every j plus the single k=n slot at j=1" } else { "k=1..n for every j" }
    )]
    InvalidASlot { m: u32, n: u32, j: u32, k: u32 },
    #[error(
        "coefficient b[j={j}] is outside the shape for m={m}, n={n} \
         (b coefficients exist only for even n and j=2..m)"
    )]
    InvalidBSlot { m: u32, n: u32, j: u32 },
    #[error("duplicate coefficient entry for {0}")]
    DuplicateEntry(String),
}

/// Parameters of one K-ring instance: `m` connect summands and complex
/// half-dimension `n`; the underlying ring has top degree `d = 2n` and
/// integer coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct KSpec {
    m: u32,
    n: u32,
}

impl KSpec {
    pub fn new(m: u32, n: u32) -> Result<Self, KError> {
        if m == 0 || n == 0 || n > u32::MAX / 2 {
            return Err(KError::InvalidSpec { m, n });
        }
        Ok(KSpec { m, n })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Top degree of the underlying ring.
    pub fn d(&self) -> u32 {
        2 * self.n
    }

    pub fn ring_spec(&self) -> RingSpec {
        RingSpec::new(self.m, 2 * self.n).expect("m, n >= 1")
    }
}

/// The generator class `η_j`.
pub fn eta(spec: &KSpec, j: u32) -> Result<KClass, KError> {
    TruncatedClass::generator(spec.ring_spec(), j)
        .map_err(|_| KError::BasisKeyOutOfRange(format!("eta generator j={j} with m={}", spec.m)))
}

/// The conjugation involution, the ring endomorphism determined by
/// `η_j ↦ -η_j/(1+η_j) = -η_j + η_j^2 - … ± η_j^d`. Constants are fixed.
pub fn conjugate(z: &KClass) -> KClass {
    let d = z.spec().d() as usize;
    let mut image: Vec<BigInt> = Vec::with_capacity(d + 1);
    image.push(BigInt::ZERO);
    for i in 1..=d {
        image.push(if i % 2 == 0 {
            BigInt::one()
        } else {
            -BigInt::one()
        });
    }
    let images = vec![image; z.spec().m() as usize];
    z.substitute(&images, Clone::clone)
        .expect("conjugation image is a valid nilpotent series")
}

/// `φ = 1 + t`: the composite of realification and complexification.
pub fn phi(z: &KClass) -> KClass {
    z.add(&conjugate(z)).expect("same spec")
}

/// Names for the distinguished K-classes.
///
/// With `η = η_j` and `η̄` its conjugate:
/// `EtaPow` is `η^k`; `HPow` is `(1+η)^k` for any integer `k` (the powers of
/// the pulled-back line bundle class); `E` is `η(η+η̄)^k`; `F` is
/// `(η-η̄)(η+η̄)^k`; `W` is `(1+η)^k - (1+η)^{-k}`; `Omega` is the common top
/// class `η_1^{2n} = … = η_m^{2n}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BasisKey {
    EtaPow { j: u32, k: u32 },
    HPow { j: u32, k: i64 },
    E { j: u32, k: u32 },
    F { j: u32, k: u32 },
    W { j: u32, k: u32 },
    Omega,
}

impl fmt::Display for BasisKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisKey::EtaPow { j, k } => write!(f, "eta_{j}^{k}"),
            BasisKey::HPow { j, k } => write!(f, "H_{j}^{k}"),
            BasisKey::E { j, k } => write!(f, "e_{j}^{k}"),
            BasisKey::F { j, k } => write!(f, "f_{j}^{k}"),
            BasisKey::W { j, k } => write!(f, "w_{j}^{k}"),
            BasisKey::Omega => write!(f, "omega"),
        }
    }
}

fn check_j(spec: &KSpec, j: u32, key: &BasisKey) -> Result<(), KError> {
    if j == 0 || j > spec.m {
        return Err(KError::BasisKeyOutOfRange(format!(
            "{key}: generator index {j} not in 1..={}",
            spec.m
        )));
    }
    Ok(())
}

/// Builds the named class from `η_j` and its conjugate.
pub fn basis_element(spec: &KSpec, key: BasisKey) -> Result<KClass, KError> {
    let n = spec.n;
    match key {
        BasisKey::EtaPow { j, k } => {
            check_j(spec, j, &key)?;
            if k == 0 || k > 2 * n {
                return Err(KError::BasisKeyOutOfRange(format!(
                    "{key}: power {k} not in 1..={}",
                    2 * n
                )));
            }
            Ok(eta(spec, j)?
                .pow_int(i64::from(k))
                .expect("unit not needed"))
        }
        BasisKey::HPow { j, k } => {
            check_j(spec, j, &key)?;
            let h = KClass::one(spec.ring_spec())
                .add(&eta(spec, j)?)
                .expect("same spec");
            Ok(h.pow_int(k).expect("1 + eta is a unit"))
        }
        BasisKey::E { j, k } => {
            check_j(spec, j, &key)?;
            if k > n - 1 {
                return Err(KError::BasisKeyOutOfRange(format!(
                    "{key}: exponent {k} not in 0..={}",
                    n - 1
                )));
            }
            let e = eta(spec, j)?;
            let sum = e.add(&conjugate(&e)).expect("same spec");
            Ok(
                e.mul(&sum.pow_int(i64::from(k)).expect("nonnegative power"))
                    .expect("same spec"),
            )
        }
        BasisKey::F { j, k } => {
            check_j(spec, j, &key)?;
            if k > n - 1 {
                return Err(KError::BasisKeyOutOfRange(format!(
                    "{key}: exponent {k} not in 0..={}",
                    n - 1
                )));
            }
            let e = eta(spec, j)?;
            let bar = conjugate(&e);
            let diff = e.sub(&bar).expect("same spec");
            let sum = e.add(&bar).expect("same spec");
            Ok(diff
                .mul(&sum.pow_int(i64::from(k)).expect("nonnegative power"))
                .expect("same spec"))
        }
        BasisKey::W { j, k } => {
            check_j(spec, j, &key)?;
            if k == 0 || k > n {
                return Err(KError::BasisKeyOutOfRange(format!(
                    "{key}: exponent {k} not in 1..={n}"
                )));
            }
            let plus = basis_element(spec, BasisKey::HPow { j, k: i64::from(k) })?;
            let minus = basis_element(
                spec,
                BasisKey::HPow {
                    j,
                    k: -i64::from(k),
                },
            )?;
            Ok(plus.sub(&minus).expect("same spec"))
        }
        BasisKey::Omega => Ok(eta(spec, 1)?
            .pow_int(i64::from(2 * n))
            .expect("nonnegative power")),
    }
}

/// The complex stable tangent class `(2n+1)·Σ_j η̄_j`.
pub fn stable_tangent(spec: &KSpec) -> KClass {
    let mut sum = KClass::zero(spec.ring_spec());
    for j in 1..=spec.m {
        sum = sum
            .add(&conjugate(&eta(spec, j).expect("j in range")))
            .expect("same spec");
    }
    sum.scalar_mul(&BigInt::from(2 * u64::from(spec.n) + 1))
}

/// The free generating set of the kernel of realification, in a fixed order:
/// the `w_j^k` by `(j, k)` lexicographic, then (for even `n`) the
/// `e_1^{n-1} - e_j^{n-1}` differences by `j`, then `2·e_1^{n-1} - ω`.
/// The length is `m·n` for both parities.
pub fn kernel_basis(spec: &KSpec) -> Vec<KClass> {
    let (m, n) = (spec.m, spec.n);
    let mut basis = Vec::with_capacity((m * n) as usize);
    let w_max = if n % 2 == 0 { n - 1 } else { n };
    for j in 1..=m {
        for k in 1..=w_max {
            basis.push(basis_element(spec, BasisKey::W { j, k }).expect("in range"));
        }
    }
    if n % 2 == 0 {
        let e1 = basis_element(spec, BasisKey::E { j: 1, k: n - 1 }).expect("in range");
        for j in 2..=m {
            let ej = basis_element(spec, BasisKey::E { j, k: n - 1 }).expect("in range");
            basis.push(e1.sub(&ej).expect("same spec"));
        }
        let omega = basis_element(spec, BasisKey::Omega).expect("in range");
        basis.push(
            e1.scalar_mul(&BigInt::from(2))
                .sub(&omega)
                .expect("same spec"),
        );
    }
    basis
}

/// Coordinates of a reduced K-class in the monomial basis
/// `{η_j^k : j = 1..m, k = 1..2n-1} ∪ {ω}`, with `(j, k)` lexicographic and
/// the shared top class last. The constant term is not included.
pub fn monomial_coordinates(z: &KClass) -> Vec<BigInt> {
    let spec = z.spec();
    let (m, d) = (spec.m(), spec.d());
    let mut coords = Vec::with_capacity((m * (d - 1) + 1) as usize);
    for j in 1..=m {
        for k in 1..d {
            coords.push(z.coefficient_of(j, k).expect("in range"));
        }
    }
    coords.push(z.top());
    coords
}

/// One slot of a coefficient vector, in the canonical order: all `a` slots
/// by `(j, k)` lexicographic, then all `b` slots by `j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Slot {
    A { j: u32, k: u32 },
    B { j: u32 },
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slot::A { j, k } => write!(f, "a[{j},{k}]"),
            Slot::B { j } => write!(f, "b[{j}]"),
        }
    }
}

/// The integer parameters selecting one stable almost complex structure.
///
/// For odd `n` the class is `(2n+1)Σ η̄_j + Σ_j Σ_{k=1..n} a_j^k w_j^k`; for
/// even `n` the `a_j^k` run over `k = 1..n-1` plus the single extra slot
/// `a_1^n`, and additionally `b_j (η_1^{2n-1} - η_j^{2n-1})` for `j = 2..m`.
/// Absent entries are zero; out-of-shape entries are construction errors.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SacsJson", into = "SacsJson")]
pub struct SacsCoefficients {
    m: u32,
    n: u32,
    a: BTreeMap<(u32, u32), i64>,
    b: BTreeMap<u32, i64>,
}

impl SacsCoefficients {
    pub fn zero(m: u32, n: u32) -> Result<Self, ShapeError> {
        if m == 0 || n == 0 {
            return Err(ShapeError::InvalidParams { m, n });
        }
        Ok(SacsCoefficients {
            m,
            n,
            a: BTreeMap::new(),
            b: BTreeMap::new(),
        })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn kspec(&self) -> KSpec {
        KSpec::new(self.m, self.n).expect("validated at construction")
    }

    fn a_slot_valid(m: u32, n: u32, j: u32, k: u32) -> bool {
        if j == 0 || j > m || k == 0 {
            return false;
        }
        if n.is_multiple_of(2) {
            k < n || (j == 1 && k == n)
        } else {
            k <= n
        }
    }

    fn b_slot_valid(m: u32, n: u32, j: u32) -> bool {
        n.is_multiple_of(2) && j >= 2 && j <= m
    }

    pub fn set_a(&mut self, j: u32, k: u32, value: i64) -> Result<(), ShapeError> {
        if !Self::a_slot_valid(self.m, self.n, j, k) {
            return Err(ShapeError::InvalidASlot {
                m: self.m,
                n: self.n,
                j,
                k,
            });
        }
        if value == 0 {
            self.a.remove(&(j, k));
        } else {
            self.a.insert((j, k), value);
        }
        Ok(())
    }

    pub fn set_b(&mut self, j: u32, value: i64) -> Result<(), ShapeError> {
        if !Self::b_slot_valid(self.m, self.n, j) {
            return Err(ShapeError::InvalidBSlot {
                m: self.m,
                n: self.n,
                j,
            });
        }
        if value == 0 {
            self.b.remove(&j);
        } else {
            self.b.insert(j, value);
        }
        Ok(())
    }

    pub fn a(&self, j: u32, k: u32) -> i64 {
        debug_assert!(Self::a_slot_valid(self.m, self.n, j, k));
        self.a.get(&(j, k)).copied().unwrap_or(0)
    }

    pub fn b(&self, j: u32) -> i64 {
        debug_assert!(Self::b_slot_valid(self.m, self.n, j));
        self.b.get(&j).copied().unwrap_or(0)
    }

    /// The slots of the `(m, n)` shape in canonical order. There are `m·n`
    /// of them for both parities of `n`.
    pub fn slots_for(m: u32, n: u32) -> Result<Vec<Slot>, ShapeError> {
        if m == 0 || n == 0 {
            return Err(ShapeError::InvalidParams { m, n });
        }
        let mut slots = Vec::with_capacity((m * n) as usize);
        for j in 1..=m {
            let k_max = if n.is_multiple_of(2) {
                if j == 1 {
                    n
                } else {
                    n - 1
                }
            } else {
                n
            };
            for k in 1..=k_max {
                slots.push(Slot::A { j, k });
            }
        }
        if n.is_multiple_of(2) {
            for j in 2..=m {
                slots.push(Slot::B { j });
            }
        }
        Ok(slots)
    }

    pub fn slots(&self) -> Vec<Slot> {
        Self::slots_for(self.m, self.n).expect("validated at construction")
    }

    pub fn value(&self, slot: Slot) -> i64 {
        match slot {
            Slot::A { j, k } => self.a(j, k),
            Slot::B { j } => self.b(j),
        }
    }

    pub fn set(&mut self, slot: Slot, value: i64) -> Result<(), ShapeError> {
        match slot {
            Slot::A { j, k } => self.set_a(j, k, value),
            Slot::B { j } => self.set_b(j, value),
        }
    }

    pub fn from_slot_values(
        m: u32,
        n: u32,
        values: impl IntoIterator<Item = (Slot, i64)>,
    ) -> Result<Self, ShapeError> {
        let mut out = Self::zero(m, n)?;
        for (slot, value) in values {
            out.set(slot, value)?;
        }
        Ok(out)
    }

    /// The values in canonical slot order; the lexicographic key used for
    /// deterministic search output.
    pub fn coefficient_vector(&self) -> Vec<i64> {
        self.slots().iter().map(|&s| self.value(s)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_empty() && self.b.is_empty()
    }

    /// Uniform sample with every slot in `[-bound, bound]`.
    pub fn sample<R: Rng + ?Sized>(
        m: u32,
        n: u32,
        bound: i64,
        rng: &mut R,
    ) -> Result<Self, ShapeError> {
        let mut out = Self::zero(m, n)?;
        for slot in out.slots() {
            out.set(slot, rng.random_range(-bound..=bound))?;
        }
        Ok(out)
    }

    /// Human-readable list of the nonzero entries.
    pub fn describe(&self) -> String {
        if self.is_zero() {
            return "all coefficients 0".to_string();
        }
        let mut parts = Vec::new();
        for (&(j, k), v) in &self.a {
            parts.push(format!("a[{j},{k}]={v}"));
        }
        for (&j, v) in &self.b {
            parts.push(format!("b[{j}]={v}"));
        }
        parts.join(" ")
    }
}

#[derive(Serialize, Deserialize)]
struct AEntry {
    j: u32,
    k: u32,
    value: i64,
}

#[derive(Serialize, Deserialize)]
struct BEntry {
    j: u32,
    value: i64,
}

#[derive(Serialize, Deserialize)]
struct SacsJson {
    m: u32,
    n: u32,
    #[serde(default)]
    a: Vec<AEntry>,
    #[serde(default)]
    b: Vec<BEntry>,
}

impl TryFrom<SacsJson> for SacsCoefficients {
    type Error = ShapeError;

    fn try_from(json: SacsJson) -> Result<Self, ShapeError> {
        let mut out = SacsCoefficients::zero(json.m, json.n)?;
        for entry in json.a {
            if out.a.contains_key(&(entry.j, entry.k)) {
                return Err(ShapeError::DuplicateEntry(format!(
                    "a[{},{}]",
                    entry.j, entry.k
                )));
            }
            out.set_a(entry.j, entry.k, entry.value)?;
        }
        for entry in json.b {
            if out.b.contains_key(&entry.j) {
                return Err(ShapeError::DuplicateEntry(format!("b[{}]", entry.j)));
            }
            out.set_b(entry.j, entry.value)?;
        }
        Ok(out)
    }
}

impl From<SacsCoefficients> for SacsJson {
    fn from(c: SacsCoefficients) -> SacsJson {
        SacsJson {
            m: c.m,
            n: c.n,
            a: c.a
                .iter()
                .map(|(&(j, k), &value)| AEntry { j, k, value })
                .collect(),
            b: c.b.iter().map(|(&j, &value)| BEntry { j, value }).collect(),
        }
    }
}

/// The K-class selected by a coefficient vector: the stable tangent class
/// plus the chosen combination of kernel elements.
pub fn sacs_element(coeffs: &SacsCoefficients) -> KClass {
    let spec = coeffs.kspec();
    let d = spec.d();
    let mut y = stable_tangent(&spec);
    for (&(j, k), &value) in &coeffs.a {
        let w = basis_element(&spec, BasisKey::W { j, k }).expect("shape-valid slot");
        y = y
            .add(&w.scalar_mul(&BigInt::from(value)))
            .expect("same spec");
    }
    if !coeffs.b.is_empty() {
        let eta1_pow = eta(&spec, 1)
            .expect("j in range")
            .pow_int(i64::from(d - 1))
            .expect("nonnegative power");
        for (&j, &value) in &coeffs.b {
            let etaj_pow = eta(&spec, j)
                .expect("shape-valid slot")
                .pow_int(i64::from(d - 1))
                .expect("nonnegative power");
            let diff = eta1_pow.sub(&etaj_pow).expect("same spec");
            y = y
                .add(&diff.scalar_mul(&BigInt::from(value)))
                .expect("same spec");
        }
    }
    y
}
