//! Cross-validation of the banded ring representation against a naive
//! multivariate polynomial that applies the quotient relations as rewrite
//! rules. The naive side shares no code with the ring: monomials are
//! exponent vectors, products are term-by-term, and reduction drops mixed
//! monomials and degrees above d.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use cpacs_core::{conjugate, eta, kernel_basis, KSpec, RingSpec, TruncatedClass};

/// Multivariate polynomial over the integers, reduced modulo the relations:
/// monomials with two distinct variables vanish, and any single variable
/// power above `d` vanishes. The shared top class stays split per variable.
#[derive(Clone, Debug, PartialEq, Eq)]
struct NaivePoly {
    m: usize,
    d: u32,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl NaivePoly {
    fn zero(m: usize, d: u32) -> Self {
        NaivePoly {
            m,
            d,
            terms: BTreeMap::new(),
        }
    }

    fn constant(m: usize, d: u32, value: i64) -> Self {
        let mut out = Self::zero(m, d);
        out.insert(vec![0; m], BigInt::from(value));
        out
    }

    fn variable(m: usize, d: u32, j: usize) -> Self {
        let mut out = Self::zero(m, d);
        let mut exps = vec![0; m];
        exps[j - 1] = 1;
        out.insert(exps, BigInt::from(1));
        out
    }

    fn insert(&mut self, exps: Vec<u32>, coeff: BigInt) {
        use num_traits::Zero;
        if coeff.is_zero() {
            return;
        }
        // reduction: mixed monomials vanish, degrees above d vanish
        let support = exps.iter().filter(|&&e| e > 0).count();
        if support > 1 {
            return;
        }
        if exps.iter().any(|&e| e > self.d) {
            return;
        }
        let entry = self.terms.entry(exps).or_insert_with(BigInt::zero);
        *entry += coeff;
        if entry.is_zero() {
            let key = self
                .terms
                .iter()
                .find(|(_, v)| v.is_zero())
                .map(|(k, _)| k.clone());
            if let Some(key) = key {
                self.terms.remove(&key);
            }
        }
    }

    fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (exps, coeff) in &other.terms {
            out.insert(exps.clone(), coeff.clone());
        }
        out
    }

    fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.m, self.d);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exps: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.insert(exps, ca.clone() * cb.clone());
            }
        }
        out
    }

    fn pow(&self, e: u32) -> Self {
        let mut out = Self::constant(self.m, self.d, 1);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    fn scale(&self, s: i64) -> Self {
        let mut out = Self::zero(self.m, self.d);
        for (exps, coeff) in &self.terms {
            out.insert(exps.clone(), coeff.clone() * BigInt::from(s));
        }
        out
    }

    /// Substitutes each variable by a univariate polynomial in itself, given
    /// by coefficients of degrees 0..=d (constant term must be zero).
    fn substitute(&self, images: &[Vec<i64>]) -> Self {
        let mut out = Self::zero(self.m, self.d);
        for (exps, coeff) in &self.terms {
            let mut term = Self::constant(self.m, self.d, 1);
            for (var, &e) in exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let mut image = Self::zero(self.m, self.d);
                for (deg, &c) in images[var].iter().enumerate() {
                    if c != 0 {
                        let mut exps = vec![0; self.m];
                        exps[var] = deg as u32;
                        image.insert(exps, BigInt::from(c));
                    }
                }
                term = term.mul(&image.pow(e));
            }
            let mut scaled = Self::zero(self.m, self.d);
            for (e2, c2) in &term.terms {
                scaled.insert(e2.clone(), c2.clone() * coeff.clone());
            }
            out = out.add(&scaled);
        }
        out
    }

    /// Compares against a banded class: constant, every per-generator band
    /// entry below d, and the per-generator degree-d shares.
    fn matches(&self, class: &TruncatedClass<BigInt>) -> bool {
        use num_traits::Zero;
        let constant = self
            .terms
            .get(&vec![0; self.m])
            .cloned()
            .unwrap_or_else(BigInt::zero);
        if &constant != class.c0() {
            return false;
        }
        for j in 1..=self.m {
            let band = class.restrict_to_generator(j as u32).unwrap();
            for k in 1..=self.d {
                let mut exps = vec![0; self.m];
                exps[j - 1] = k;
                let naive = self.terms.get(&exps).cloned().unwrap_or_else(BigInt::zero);
                if naive != band[k as usize] {
                    return false;
                }
            }
        }
        true
    }
}

struct Sampler {
    rng: ChaCha20Rng,
}

impl Sampler {
    fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha20Rng::seed_from_u64(seed),
        }
    }

    /// A random element built from the same sequence of generator/degree/
    /// coefficient picks on both representations.
    fn element(&mut self, spec: RingSpec) -> (TruncatedClass<BigInt>, NaivePoly) {
        let m = spec.m() as usize;
        let d = spec.d();
        let c0 = self.rng.random_range(-4i64..=4);
        let mut class = TruncatedClass::constant(spec, BigInt::from(c0));
        let mut naive = NaivePoly::constant(m, d, c0);
        for _ in 0..self.rng.random_range(0..6usize) {
            let j = self.rng.random_range(1..=spec.m());
            let k = self.rng.random_range(1..=d);
            let v = self.rng.random_range(-4i64..=4);
            let monomial = TruncatedClass::generator(spec, j)
                .unwrap()
                .pow_int(i64::from(k))
                .unwrap()
                .scalar_mul(&BigInt::from(v));
            class = class.add(&monomial).unwrap();
            naive = naive.add(&NaivePoly::variable(m, d, j as usize).pow(k).scale(v));
        }
        (class, naive)
    }
}

#[test]
fn products_match_naive_expansion() {
    let mut sampler = Sampler::new(101);
    for &(m, d) in &[(1u32, 2u32), (2, 2), (2, 4), (3, 3)] {
        let spec = RingSpec::new(m, d).unwrap();
        for _ in 0..40 {
            let (ca, na) = sampler.element(spec);
            let (cb, nb) = sampler.element(spec);
            assert!(na.mul(&nb).matches(&ca.mul(&cb).unwrap()), "m={m} d={d}");
            assert!(na.add(&nb).matches(&ca.add(&cb).unwrap()), "m={m} d={d}");
        }
    }
}

#[test]
fn powers_match_naive_expansion() {
    let mut sampler = Sampler::new(202);
    for &(m, d) in &[(2u32, 3u32), (3, 4)] {
        let spec = RingSpec::new(m, d).unwrap();
        for _ in 0..15 {
            let (ca, na) = sampler.element(spec);
            for e in 0..=4u32 {
                assert!(
                    na.pow(e).matches(&ca.pow_int(i64::from(e)).unwrap()),
                    "m={m} d={d} e={e}"
                );
            }
        }
    }
}

#[test]
fn inverse_times_original_is_one_naively() {
    let mut sampler = Sampler::new(303);
    let spec = RingSpec::new(2, 4).unwrap();
    for _ in 0..20 {
        let (ca, na) = sampler.element(spec);
        // force a unit constant term on both sides
        let unit_class = ca
            .sub(&TruncatedClass::constant(spec, ca.c0().clone()))
            .unwrap()
            .add(&TruncatedClass::one(spec))
            .unwrap();
        let constant = na.terms.get(&vec![0, 0]).cloned().unwrap_or_default();
        let mut unit_naive = na.clone();
        let mut adjust = NaivePoly::zero(2, 4);
        adjust.insert(vec![0, 0], BigInt::from(1) - constant);
        unit_naive = unit_naive.add(&adjust);

        let inverse = unit_class.invert_unit().unwrap();
        // replay the inverse through the naive ring: u * product must be 1
        let mut inverse_naive = NaivePoly::zero(2, 4);
        let c0 = inverse.c0().clone();
        inverse_naive.insert(vec![0, 0], c0);
        for j in 1..=2u32 {
            let band = inverse.restrict_to_generator(j).unwrap();
            for (k, coeff) in band.iter().enumerate().skip(1) {
                let mut exps = vec![0, 0];
                exps[(j - 1) as usize] = k as u32;
                inverse_naive.insert(exps, coeff.clone());
            }
        }
        let product = unit_naive.mul(&inverse_naive);
        assert!(product.matches(&TruncatedClass::one(spec)));
    }
}

#[test]
fn per_generator_restriction_of_factored_products() {
    // the restriction of a product of per-generator factors equals the
    // product of that generator's univariate truncations
    let mut rng = ChaCha20Rng::seed_from_u64(404);
    for &(m, d) in &[(2u32, 2u32), (3, 4)] {
        let spec = RingSpec::new(m, d).unwrap();
        for _ in 0..20 {
            let mut product = TruncatedClass::one(spec);
            let mut univariate: Vec<Vec<BigInt>> = (0..m)
                .map(|_| {
                    let mut s = vec![BigInt::from(0); d as usize + 1];
                    s[0] = BigInt::from(1);
                    s
                })
                .collect();
            for j in 1..=m {
                // factor: 1 + a x_j + b x_j^2
                let a = rng.random_range(-3i64..=3);
                let b = rng.random_range(-3i64..=3);
                let factor = TruncatedClass::one(spec)
                    .add(
                        &TruncatedClass::generator(spec, j)
                            .unwrap()
                            .scalar_mul(&BigInt::from(a)),
                    )
                    .unwrap()
                    .add(
                        &TruncatedClass::generator(spec, j)
                            .unwrap()
                            .pow_int(2)
                            .unwrap()
                            .scalar_mul(&BigInt::from(b)),
                    )
                    .unwrap();
                let exponent = rng.random_range(0i64..=3);
                let factor_pow = factor.pow_int(exponent).unwrap();
                product = product.mul(&factor_pow).unwrap();
                univariate[(j - 1) as usize] = factor_pow.restrict_to_generator(j).unwrap();
            }
            for j in 1..=m {
                let restricted = product.restrict_to_generator(j).unwrap();
                // multiply the j-th univariate truncation by the constants of
                // the other factors (their restrictions are constants here)
                let mut expected = univariate[(j - 1) as usize].clone();
                for other in 1..=m {
                    if other != j {
                        let c = univariate[(other - 1) as usize][0].clone();
                        expected = expected.into_iter().map(|v| v * c.clone()).collect();
                    }
                }
                assert_eq!(restricted, expected, "m={m} d={d} j={j}");
            }
        }
    }
}

#[test]
fn kernel_anti_invariance_via_naive_conjugation() {
    // phi(z) = z + t(z) = 0 for every kernel basis element, where t is
    // replayed on the naive side as the substitution eta -> -eta + eta^2 - ...
    for (m, n) in [(1u32, 1u32), (2, 2), (3, 2), (2, 3)] {
        let spec = KSpec::new(m, n).unwrap();
        let d = spec.d();
        let images: Vec<Vec<i64>> = (0..m)
            .map(|_| {
                let mut image = vec![0i64; d as usize + 1];
                for (i, v) in image.iter_mut().enumerate().skip(1) {
                    *v = if i % 2 == 0 { 1 } else { -1 };
                }
                image
            })
            .collect();
        for z in kernel_basis(&spec) {
            // rebuild z naively from its bands
            let mut naive = NaivePoly::zero(m as usize, d);
            naive.insert(vec![0; m as usize], z.c0().clone());
            for j in 1..=m {
                let band = z.restrict_to_generator(j).unwrap();
                for (k, coeff) in band.iter().enumerate().skip(1) {
                    let mut exps = vec![0; m as usize];
                    exps[(j - 1) as usize] = k as u32;
                    naive.insert(exps, coeff.clone());
                }
            }
            let phi_naive = naive.add(&naive.substitute(&images));
            // ring-zero: constant and sub-top bands vanish, degree-d shares sum to zero
            use num_traits::Zero;
            let mut top_sum = BigInt::zero();
            for (exps, coeff) in &phi_naive.terms {
                let degree: u32 = exps.iter().sum();
                if degree == d {
                    top_sum += coeff.clone();
                } else {
                    panic!("m={m} n={n}: nonzero term of degree {degree}");
                }
            }
            assert!(top_sum.is_zero(), "m={m} n={n}");
            // and the ring side agrees
            let phi_ring = z.add(&conjugate(&z)).unwrap();
            assert!(phi_ring.is_zero());
        }
    }
}

#[test]
fn conjugation_matches_naive_substitution() {
    let mut sampler = Sampler::new(505);
    for (m, n) in [(2u32, 1u32), (2, 2), (3, 2)] {
        let kspec = KSpec::new(m, n).unwrap();
        let spec = kspec.ring_spec();
        let d = spec.d();
        let images: Vec<Vec<i64>> = (0..m)
            .map(|_| {
                let mut image = vec![0i64; d as usize + 1];
                for (i, v) in image.iter_mut().enumerate().skip(1) {
                    *v = if i % 2 == 0 { 1 } else { -1 };
                }
                image
            })
            .collect();
        for _ in 0..15 {
            let (class, naive) = sampler.element(spec);
            assert!(
                naive.substitute(&images).matches(&conjugate(&class)),
                "m={m} n={n}"
            );
        }
        // spot check: the generators themselves
        for j in 1..=m {
            let e = eta(&kspec, j).unwrap();
            let naive = NaivePoly::variable(m as usize, d, j as usize);
            assert!(naive.substitute(&images).matches(&conjugate(&e)));
        }
    }
}
