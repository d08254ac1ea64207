//! Characteristic-class computations: the Chern character of K-classes,
//! Chern-class recovery through the Newton-identity recurrence, and the
//! closed-form total Chern class of the stable-almost-complex-structure
//! family.
//!
//! The two routes to the total Chern class are deliberately independent. The
//! character route maps `η_j ↦ e^{x_j} - 1` into the rational cohomology ring
//! and walks the Newton recurrence `p_k = c_1 p_{k-1} - c_2 p_{k-2} + … +
//! (-1)^{k-2} c_{k-1} p_1 + (-1)^{k-1} k c_k` degree by degree, asserting at
//! the end that every recovered class is integral. The closed-form route
//! multiplies unit factors directly in the integer cohomology ring. Their
//! agreement on the whole coefficient family is one of the main verification
//! suites.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::ktheory::{KClass, SacsCoefficients, Slot};
use crate::ring::{RingSpec, TruncatedClass};

/// Element of the integral cohomology ring (same quotient-ring shape as the
/// K-ring).
pub type CohomologyClass = TruncatedClass<BigInt>;
/// Element of the rational cohomology ring.
pub type RationalClass = TruncatedClass<BigRational>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChernError {
    #[error(
        "character has nonzero constant term {c0}; expected the reduced character of a \
         rank-0 virtual class"
    )]
    NonReducedCharacter { c0: String },
    #[error("recovered Chern class c_{degree} is not integral: {class}")]
    NonIntegralClass { degree: u32, class: String },
    #[error("total Chern class must have constant term 1, got {c0}")]
    BadConstantTerm { c0: String },
}

pub(crate) fn factorial(n: u32) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= i;
    }
    acc
}

/// Total Chern class of a virtual-bundle class, together with the integer
/// coefficient sequence `[1, c_1, …, c_d]` read off at generator 1 (for a
/// single summand that is the whole class) and `c_d` the coalesced top
/// coefficient. The full multi-generator class stays available in
/// [`ChernData::total`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChernData {
    total: CohomologyClass,
    by_degree: Vec<BigInt>,
}

impl ChernData {
    pub fn from_total(total: CohomologyClass) -> Result<Self, ChernError> {
        if !total.c0().is_one() {
            return Err(ChernError::BadConstantTerm {
                c0: total.c0().to_string(),
            });
        }
        let d = total.spec().d();
        let mut by_degree = Vec::with_capacity(d as usize + 1);
        by_degree.push(BigInt::one());
        for k in 1..d {
            by_degree.push(total.coefficient_of(1, k).expect("k in range"));
        }
        by_degree.push(total.top());
        Ok(ChernData { total, by_degree })
    }

    pub fn total(&self) -> &CohomologyClass {
        &self.total
    }

    /// `[1, c_1, …, c_d]`.
    pub fn coefficients(&self) -> &[BigInt] {
        &self.by_degree
    }

    /// The top Chern coefficient `c_d`.
    pub fn top(&self) -> &BigInt {
        self.by_degree.last().expect("nonempty by construction")
    }
}

// Report form: {"c": ["1", "c1", ..., "cd"]} as decimal strings.
impl Serialize for ChernData {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let c: Vec<String> = self.by_degree.iter().map(|v| v.to_string()).collect();
        let mut s = serializer.serialize_struct("ChernData", 1)?;
        s.serialize_field("c", &c)?;
        s.end()
    }
}

/// The reduced Chern character: the ring homomorphism into rational
/// cohomology determined by `η_j ↦ e^{x_j} - 1`, truncated at the top degree.
/// Constants map to constants.
pub fn chern_character(z: &KClass) -> RationalClass {
    let d = z.spec().d() as usize;
    let mut image: Vec<BigRational> = Vec::with_capacity(d + 1);
    image.push(BigRational::default());
    for i in 1..=d {
        image.push(BigRational::new(BigInt::one(), factorial(i as u32)));
    }
    let images = vec![image; z.spec().m() as usize];
    z.substitute(&images, |v| BigRational::from_integer(v.clone()))
        .expect("exponential image is a valid nilpotent series")
}

/// Recovers the total Chern class from a reduced character by the Newton
/// recurrence, degree by degree, and asserts integrality of every recovered
/// class. The sign convention is pinned by the line-bundle case: the
/// character `x + x²/2 + …` of `H - 1` recovers `1 + x`.
pub fn character_to_chern(ch: &RationalClass) -> Result<ChernData, ChernError> {
    if !ch.c0().is_zero() {
        return Err(ChernError::NonReducedCharacter {
            c0: ch.c0().to_string(),
        });
    }
    let spec = ch.spec();
    let d = spec.d();
    // power sums: p_k = k! * (degree-k part of the character)
    let mut power_sums: Vec<RationalClass> = Vec::with_capacity(d as usize + 1);
    power_sums.push(RationalClass::zero(spec)); // p_0 unused
    for k in 1..=d {
        let component = ch.homogeneous_component(k).expect("k in range");
        power_sums.push(component.scalar_mul(&BigRational::from_integer(factorial(k))));
    }

    let mut chern: Vec<RationalClass> = vec![RationalClass::one(spec)];
    for k in 1..=d {
        let mut acc = power_sums[k as usize].clone();
        for i in 1..k {
            let term = chern[i as usize]
                .mul(&power_sums[(k - i) as usize])
                .expect("same spec");
            // subtract (-1)^{i-1} c_i p_{k-i}
            acc = if i % 2 == 1 {
                acc.sub(&term).expect("same spec")
            } else {
                acc.add(&term).expect("same spec")
            };
        }
        let sign = if k % 2 == 1 { 1 } else { -1 };
        let scale = BigRational::new(BigInt::from(sign), BigInt::from(k));
        chern.push(acc.scalar_mul(&scale));
    }

    let mut total = CohomologyClass::one(spec);
    for (k, class) in chern.iter().enumerate().skip(1) {
        let integral = class
            .to_integer()
            .ok_or_else(|| ChernError::NonIntegralClass {
                degree: k as u32,
                class: class.to_string(),
            })?;
        total = total.add(&integral).expect("same spec");
    }
    ChernData::from_total(total)
}

fn unit_ratio_power(spec: RingSpec, j: u32, k: u32, exponent: i64) -> CohomologyClass {
    // ((1 + k x_j) / (1 - k x_j))^exponent
    let one = CohomologyClass::one(spec);
    let x = CohomologyClass::generator(spec, j).expect("j in range");
    let kx = x.scalar_mul(&BigInt::from(k));
    let numer = one.add(&kx).expect("same spec");
    let denom = one.sub(&kx).expect("same spec");
    numer
        .mul(&denom.invert_unit().expect("constant term 1"))
        .expect("same spec")
        .pow_int(exponent)
        .expect("unit base")
}

/// The total Chern class of the coefficient family, multiplied out exactly in
/// the integer cohomology ring:
/// `(1 - (x_1 + … + x_m))^{2n+1}` times one unit ratio `((1+k x_j)/(1-k x_j))^{a_j^k}`
/// per `a` slot, and for even `n` additionally
/// `(1 + (2n-2)!·(x_1^{2n-1} - x_j^{2n-1}))^{b_j}` per `b` slot.
pub fn total_chern_closed_form(coeffs: &SacsCoefficients) -> ChernData {
    let kspec = coeffs.kspec();
    let spec = kspec.ring_spec();
    let (m, n) = (kspec.m(), kspec.n());
    let d = kspec.d();
    let one = CohomologyClass::one(spec);

    let mut sum = CohomologyClass::zero(spec);
    for j in 1..=m {
        sum = sum
            .add(&CohomologyClass::generator(spec, j).expect("j in range"))
            .expect("same spec");
    }
    let mut total = one
        .sub(&sum)
        .expect("same spec")
        .pow_int(i64::from(2 * n + 1))
        .expect("nonnegative power");

    for slot in coeffs.slots() {
        let value = coeffs.value(slot);
        if value == 0 {
            continue;
        }
        let factor = match slot {
            Slot::A { j, k } => unit_ratio_power(spec, j, k, value),
            Slot::B { j } => {
                let x1_pow = CohomologyClass::generator(spec, 1)
                    .expect("j in range")
                    .pow_int(i64::from(d - 1))
                    .expect("nonnegative power");
                let xj_pow = CohomologyClass::generator(spec, j)
                    .expect("j in range")
                    .pow_int(i64::from(d - 1))
                    .expect("nonnegative power");
                let diff = x1_pow
                    .sub(&xj_pow)
                    .expect("same spec")
                    .scalar_mul(&factorial(d - 2));
                one.add(&diff)
                    .expect("same spec")
                    .pow_int(value)
                    .expect("unit base")
            }
        };
        total = total.mul(&factor).expect("same spec");
    }

    ChernData::from_total(total).expect("product of units with constant term 1")
}

/// The top Chern coefficient of the coefficient family: the coalesced
/// degree-`2n` coefficient of the closed-form total Chern class.
pub fn top_chern_of_sacs(coeffs: &SacsCoefficients) -> BigInt {
    total_chern_closed_form(coeffs).top().clone()
}
