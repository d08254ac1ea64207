//! Manifold-level invariants of the m-fold connected sum of CP^{2n} and the
//! two decision predicates: the mod-4 congruence between Euler characteristic
//! and signature, and the almost-complex-structure criterion comparing the
//! top Chern coefficient of a stable structure with the Euler characteristic.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chern::top_chern_of_sacs;
use crate::ktheory::SacsCoefficients;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TopologyError {
    #[error("invalid parameters m={m}, n={n}: both must be at least 1")]
    InvalidParams { m: u32, n: u32 },
    #[error("invariants overflow for m={m}, n={n}")]
    Overflow { m: u32, n: u32 },
    #[error("the explicit witness construction requires odd m, got m={m}")]
    EvenM { m: u32 },
}

/// Integer invariants of the connected sum, under the orientation induced by
/// the complex structure of each summand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ManifoldInvariants {
    pub m: u32,
    pub n: u32,
    /// Real dimension, `4n`.
    pub dimension: u32,
    /// Euler characteristic: `m(2n - 1) + 2`.
    pub euler: i64,
    /// Signature: each summand contributes +1, so `σ = m`.
    pub signature: i64,
}

pub fn invariants(m: u32, n: u32) -> Result<ManifoldInvariants, TopologyError> {
    if m == 0 || n == 0 {
        return Err(TopologyError::InvalidParams { m, n });
    }
    let euler = i64::from(m)
        .checked_mul(2 * i64::from(n) - 1)
        .and_then(|v| v.checked_add(2))
        .ok_or(TopologyError::Overflow { m, n })?;
    let dimension = n.checked_mul(4).ok_or(TopologyError::Overflow { m, n })?;
    Ok(ManifoldInvariants {
        m,
        n,
        dimension,
        euler,
        signature: i64::from(m),
    })
}

/// The congruence `χ ≡ (-1)^n σ (mod 4)`, a necessary condition for an
/// almost complex structure on a 4n-manifold. For these connected sums it
/// holds exactly when `m` is odd.
pub fn hirzebruch_check(m: u32, n: u32) -> Result<bool, TopologyError> {
    let inv = invariants(m, n)?;
    let signed_sigma = if n.is_multiple_of(2) {
        inv.signature
    } else {
        -inv.signature
    };
    Ok((inv.euler - signed_sigma).rem_euclid(4) == 0)
}

/// One evaluated coefficient vector: its top Chern coefficient, the Euler
/// characteristic it is compared against, and the verdict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessRecord {
    pub m: u32,
    pub n: u32,
    pub coeffs: SacsCoefficients,
    #[serde(with = "crate::serde_util::bigint_decimal")]
    pub c_top: BigInt,
    pub chi: i64,
    pub verdict: bool,
}

/// Evaluates the almost-complex-structure criterion for one coefficient
/// vector: the verdict is `c_{2n} = χ`.
pub fn acs_criterion(coeffs: &SacsCoefficients) -> WitnessRecord {
    let (m, n) = (coeffs.m(), coeffs.n());
    let inv = invariants(m, n).expect("coefficients validated at construction");
    let c_top = top_chern_of_sacs(coeffs);
    let verdict = c_top == BigInt::from(inv.euler);
    WitnessRecord {
        m,
        n,
        coeffs: coeffs.clone(),
        c_top,
        chi: inv.euler,
        verdict,
    }
}

/// The explicit witness for odd `m = 2u + 1`: `a_j^1 = 2` on the first `u`
/// summands, everything else zero. Its top Chern coefficient is
/// `u(2n-3) + (u+1)(2n+1) = m(2n-1) + 2 = χ`.
pub fn explicit_witness(m: u32, n: u32) -> Result<SacsCoefficients, TopologyError> {
    if m == 0 || n == 0 {
        return Err(TopologyError::InvalidParams { m, n });
    }
    if m.is_multiple_of(2) {
        return Err(TopologyError::EvenM { m });
    }
    let u = (m - 1) / 2;
    let mut coeffs = SacsCoefficients::zero(m, n).expect("m, n >= 1");
    for j in 1..=u {
        coeffs
            .set_a(j, 1, 2)
            .expect("k = 1 is a valid slot for every parity");
    }
    Ok(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ktheory::Slot;

    #[test]
    fn invariants_examples() {
        let inv = invariants(1, 1).unwrap();
        assert_eq!((inv.euler, inv.signature, inv.dimension), (3, 1, 4));

        let inv = invariants(3, 2).unwrap();
        assert_eq!((inv.euler, inv.signature), (11, 3));

        for u in 0..5u32 {
            for n in 1..=4 {
                let m = 2 * u + 1;
                let inv = invariants(m, n).unwrap();
                assert_eq!(inv.euler, i64::from(2 * u + 1) * (2 * i64::from(n) - 1) + 2);
            }
        }

        assert!(invariants(0, 1).is_err());
        assert!(invariants(1, 0).is_err());
    }

    #[test]
    fn hirzebruch_examples() {
        assert!(!hirzebruch_check(2, 1).unwrap());
        assert!(hirzebruch_check(3, 2).unwrap());
        for n in 1..=8 {
            assert!(hirzebruch_check(1, n).unwrap());
        }
    }

    #[test]
    fn hirzebruch_is_parity_of_m() {
        for m in 1..=20 {
            for n in 1..=8 {
                assert_eq!(hirzebruch_check(m, n).unwrap(), m % 2 == 1, "m={m} n={n}");
            }
        }
    }

    #[test]
    fn acs_criterion_examples() {
        let coeffs =
            SacsCoefficients::from_slot_values(3, 1, [(Slot::A { j: 1, k: 1 }, 2)]).unwrap();
        let rec = acs_criterion(&coeffs);
        assert_eq!(rec.c_top, BigInt::from(5));
        assert_eq!(rec.chi, 5);
        assert!(rec.verdict);

        let zero = SacsCoefficients::zero(1, 2).unwrap();
        let rec = acs_criterion(&zero);
        assert_eq!(rec.c_top, BigInt::from(5));
        assert!(rec.verdict);

        let coeffs = SacsCoefficients::from_slot_values(
            2,
            1,
            [(Slot::A { j: 1, k: 1 }, 2), (Slot::A { j: 2, k: 1 }, 2)],
        )
        .unwrap();
        let rec = acs_criterion(&coeffs);
        assert_eq!(rec.c_top, BigInt::from(-2));
        assert_eq!(rec.chi, 4);
        assert!(!rec.verdict);
    }

    #[test]
    fn explicit_witness_shapes() {
        let w = explicit_witness(1, 3).unwrap();
        assert!(w.is_zero());

        let w = explicit_witness(5, 3).unwrap();
        assert_eq!(w.a(1, 1), 2);
        assert_eq!(w.a(2, 1), 2);
        assert_eq!(w.a(3, 1), 0);

        assert!(matches!(
            explicit_witness(4, 3),
            Err(TopologyError::EvenM { .. })
        ));
        assert!(explicit_witness(0, 3).is_err());
    }

    #[test]
    fn explicit_witness_verifies() {
        for m in [1u32, 3, 5, 7] {
            for n in 1..=3 {
                let rec = acs_criterion(&explicit_witness(m, n).unwrap());
                assert!(rec.verdict, "m={m} n={n}");
                assert_eq!(rec.c_top, BigInt::from(rec.chi));
            }
        }
    }

    #[test]
    fn witness_record_serialization() {
        let rec = acs_criterion(&explicit_witness(3, 1).unwrap());
        let json = serde_json::to_value(&rec).unwrap();
        assert_eq!(json["m"], 3);
        assert_eq!(json["c_top"], "5");
        assert_eq!(json["chi"], 5);
        assert_eq!(json["verdict"], true);
        let back: WitnessRecord = serde_json::from_value(json).unwrap();
        assert_eq!(back, rec);
    }
}
