//! Exact computation of characteristic classes and almost-complex-structure
//! witnesses on connected sums of complex projective spaces.
//!
//! The crate models the integral cohomology ring and the complex K-theory of
//! the m-fold connected sum of CP^{2n} as a truncated polynomial quotient
//! ring, constructs the family of stable almost complex structures in reduced
//! K-theory, computes their Chern classes exactly (by two independent routes),
//! and enumerates coefficient boxes for vectors whose top Chern class equals
//! the Euler characteristic.
//!
//! Modules:
//! - [`ring`]: the shared quotient-ring arithmetic with exact integer or
//!   rational coefficients.
//! - [`ktheory`]: eta classes, conjugation, the kernel-of-realification basis
//!   and the coefficient family of stable almost complex structures.
//! - [`chern`]: Chern character, Chern-class recovery via Newton identities,
//!   and the closed-form total Chern class.
//! - [`topology`]: Euler characteristic, signature, the mod-4 congruence test
//!   and the witness criterion.
//! - [`search`]: exhaustive witness search, brute force and per-generator
//!   decomposed, with identical deterministic output.
//! - [`selftest`]: the runtime identity suites exposed by the CLI.

pub mod chern;
pub mod ktheory;
pub mod linalg;
pub mod ring;
pub mod search;
pub mod selftest;
pub mod topology;
pub mod univariate;

mod serde_util;

pub use chern::{
    character_to_chern, chern_character, top_chern_of_sacs, total_chern_closed_form, ChernData,
    ChernError, CohomologyClass, RationalClass,
};
pub use ktheory::{
    basis_element, conjugate, eta, kernel_basis, monomial_coordinates, phi, sacs_element,
    stable_tangent, BasisKey, KClass, KError, KSpec, SacsCoefficients, ShapeError, Slot,
};
pub use ring::{RingError, RingSpec, Scalar, TruncatedClass};
pub use search::{
    contribution_table, search_witnesses, ContributionEntry, ContributionTable, GeneratorTable,
    SearchBox, SearchError, SearchLimits, SearchMode,
};
pub use selftest::{run_selftest, CheckResult};
pub use topology::{
    acs_criterion, explicit_witness, hirzebruch_check, invariants, ManifoldInvariants,
    TopologyError, WitnessRecord,
};
