//! Runtime identity suites, exposed through the CLI. Each suite re-derives a
//! family of exact identities from scratch and reports case and failure
//! counts; the random suites use a fixed seed so runs are reproducible.

use num_bigint::BigInt;
use num_traits::One;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::Serialize;

use crate::chern::{character_to_chern, chern_character, total_chern_closed_form};
use crate::ktheory::{
    basis_element, conjugate, eta, kernel_basis, monomial_coordinates, phi, sacs_element, BasisKey,
    KClass, KSpec, SacsCoefficients,
};
use crate::linalg;

const SELFTEST_SEED: u64 = 0x5ac5_7e57;
const MAX_M: u32 = 3;
const MAX_N: u32 = 4;
const RANDOM_VECTORS: usize = 25;

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub cases: u32,
    pub failures: u32,
    /// Description of the first failing case, if any.
    pub detail: Option<String>,
}

struct Suite {
    name: &'static str,
    cases: u32,
    failures: u32,
    detail: Option<String>,
}

impl Suite {
    fn new(name: &'static str) -> Self {
        Suite {
            name,
            cases: 0,
            failures: 0,
            detail: None,
        }
    }

    fn record(&mut self, passed: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !passed {
            self.failures += 1;
            if self.detail.is_none() {
                self.detail = Some(describe());
            }
        }
    }

    fn finish(self) -> CheckResult {
        CheckResult {
            name: self.name,
            cases: self.cases,
            failures: self.failures,
            detail: self.detail,
        }
    }
}

fn specs() -> impl Iterator<Item = KSpec> {
    (1..=MAX_M).flat_map(|m| (1..=MAX_N).map(move |n| KSpec::new(m, n).expect("valid")))
}

/// Runs every suite and returns one result per suite.
pub fn run_selftest() -> Vec<CheckResult> {
    let mut results = Vec::new();

    // (eta + eta_bar)^k = 2 e^{k-1} - f^{k-1}
    let mut suite = Suite::new("power_sum_relation");
    for spec in specs() {
        for j in 1..=spec.m() {
            let e = eta(&spec, j).expect("in range");
            let sum = e.add(&conjugate(&e)).expect("same spec");
            for k in 1..=spec.n() {
                let lhs = sum.pow_int(i64::from(k)).expect("nonnegative");
                let rhs = basis_element(&spec, BasisKey::E { j, k: k - 1 })
                    .expect("in range")
                    .scalar_mul(&BigInt::from(2))
                    .sub(&basis_element(&spec, BasisKey::F { j, k: k - 1 }).expect("in range"))
                    .expect("same spec");
                suite.record(lhs == rhs, || {
                    format!("m={} n={} j={j} k={k}", spec.m(), spec.n())
                });
            }
        }
    }
    results.push(suite.finish());

    // eta^{2n} = (eta + eta_bar)^n
    let mut suite = Suite::new("top_power_relation");
    for spec in specs() {
        for j in 1..=spec.m() {
            let e = eta(&spec, j).expect("in range");
            let sum = e.add(&conjugate(&e)).expect("same spec");
            let lhs = e.pow_int(i64::from(2 * spec.n())).expect("nonnegative");
            let rhs = sum.pow_int(i64::from(spec.n())).expect("nonnegative");
            suite.record(lhs == rhs, || {
                format!("m={} n={} j={j}", spec.m(), spec.n())
            });
        }
    }
    results.push(suite.finish());

    // eta_bar = -eta + eta^2 - ... +- eta^{2n}
    let mut suite = Suite::new("conjugation_series");
    for spec in specs() {
        for j in 1..=spec.m() {
            let e = eta(&spec, j).expect("in range");
            let mut series = KClass::zero(spec.ring_spec());
            for i in 1..=spec.d() {
                let sign = BigInt::from(if i % 2 == 0 { 1 } else { -1 });
                let term = e
                    .pow_int(i64::from(i))
                    .expect("nonnegative")
                    .scalar_mul(&sign);
                series = series.add(&term).expect("same spec");
            }
            suite.record(conjugate(&e) == series, || {
                format!("m={} n={} j={j}", spec.m(), spec.n())
            });
        }
    }
    results.push(suite.finish());

    // (1 + eta) * conjugate(1 + eta) = 1
    let mut suite = Suite::new("line_bundle_conjugate");
    for spec in specs() {
        let one = KClass::one(spec.ring_spec());
        for j in 1..=spec.m() {
            let h = one
                .add(&eta(&spec, j).expect("in range"))
                .expect("same spec");
            let product = h.mul(&conjugate(&h)).expect("same spec");
            suite.record(product == one, || {
                format!("m={} n={} j={j}", spec.m(), spec.n())
            });
        }
    }
    results.push(suite.finish());

    // e_1^{n-1} - e_j^{n-1} = eta_1^{2n-1} - eta_j^{2n-1}
    let mut suite = Suite::new("e_difference");
    for spec in specs().filter(|s| s.m() >= 2) {
        let n = spec.n();
        let e1 = basis_element(&spec, BasisKey::E { j: 1, k: n - 1 }).expect("in range");
        let eta1 = eta(&spec, 1)
            .expect("in range")
            .pow_int(i64::from(2 * n - 1))
            .expect("nonnegative");
        for j in 2..=spec.m() {
            let ej = basis_element(&spec, BasisKey::E { j, k: n - 1 }).expect("in range");
            let etaj = eta(&spec, j)
                .expect("in range")
                .pow_int(i64::from(2 * n - 1))
                .expect("nonnegative");
            let lhs = e1.sub(&ej).expect("same spec");
            let rhs = eta1.sub(&etaj).expect("same spec");
            suite.record(lhs == rhs, || format!("m={} n={n} j={j}", spec.m()));
        }
    }
    results.push(suite.finish());

    // phi vanishes on the kernel basis, and the basis has full rank m*n
    let mut suite = Suite::new("kernel_basis");
    for spec in specs() {
        let basis = kernel_basis(&spec);
        let expected_len = (spec.m() * spec.n()) as usize;
        suite.record(basis.len() == expected_len, || {
            format!("m={} n={}: length {}", spec.m(), spec.n(), basis.len())
        });
        for (idx, z) in basis.iter().enumerate() {
            suite.record(phi(z).is_zero(), || {
                format!("m={} n={}: phi of element {idx}", spec.m(), spec.n())
            });
        }
        let rows: Vec<Vec<BigInt>> = basis.iter().map(monomial_coordinates).collect();
        suite.record(linalg::rank_of_integer_rows(&rows) == expected_len, || {
            format!("m={} n={}: rank deficient", spec.m(), spec.n())
        });
    }
    results.push(suite.finish());

    // Newton-character route equals the closed form on random vectors
    let mut suite = Suite::new("oracle_equivalence");
    let mut rng = ChaCha20Rng::seed_from_u64(SELFTEST_SEED);
    for i in 0..RANDOM_VECTORS {
        let m = 1 + (i as u32 % MAX_M);
        let n = 1 + (i as u32 % MAX_N);
        let coeffs = SacsCoefficients::sample(m, n, 3, &mut rng).expect("valid parameters");
        let via_character = character_to_chern(&chern_character(&sacs_element(&coeffs)));
        match via_character {
            Ok(data) => {
                let closed = total_chern_closed_form(&coeffs);
                suite.record(data == closed, || {
                    format!("m={m} n={n} coeffs {}", coeffs.describe())
                });
                suite.record(data.coefficients()[0] == BigInt::one(), || {
                    format!("m={m} n={n}: constant term")
                });
            }
            Err(err) => suite.record(false, || format!("m={m} n={n}: {err}")),
        }
    }
    results.push(suite.finish());

    results
}
