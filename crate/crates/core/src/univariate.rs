//! Truncated univariate power-series helpers.
//!
//! A series is a coefficient vector of fixed length `d + 1` for degrees
//! `0..=d`; products silently drop everything above degree `d`. These are the
//! single-generator restrictions used by per-summand contribution tables and
//! by ring substitutions.

use crate::ring::{RingError, Scalar};

pub fn zero<S: Scalar>(d: usize) -> Vec<S> {
    vec![S::zero(); d + 1]
}

pub fn one<S: Scalar>(d: usize) -> Vec<S> {
    let mut out = zero(d);
    out[0] = S::one();
    out
}

/// `coefficient * x^k`, truncated.
pub fn monomial<S: Scalar>(d: usize, k: usize, coefficient: S) -> Vec<S> {
    let mut out = zero(d);
    if k <= d {
        out[k] = coefficient;
    }
    out
}

pub fn add<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    assert_eq!(a.len(), b.len(), "series length mismatch");
    a.iter()
        .zip(b)
        .map(|(x, y)| x.clone() + y.clone())
        .collect()
}

pub fn scale<S: Scalar>(a: &[S], s: &S) -> Vec<S> {
    a.iter().map(|x| x.clone() * s.clone()).collect()
}

/// Truncated product.
pub fn mul<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    assert_eq!(a.len(), b.len(), "series length mismatch");
    let d = a.len() - 1;
    let mut out: Vec<S> = zero(d);
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().take(d + 1 - i).enumerate() {
            if !y.is_zero() {
                out[i + j] = out[i + j].clone() + x.clone() * y.clone();
            }
        }
    }
    out
}

/// Exact inverse of a unit series: geometric series in the nilpotent part.
pub fn invert<S: Scalar>(a: &[S]) -> Result<Vec<S>, RingError> {
    let d = a.len() - 1;
    let u = a[0].inverse().ok_or_else(|| RingError::NotAUnit {
        c0: a[0].to_string(),
    })?;
    // -u * (a - a0)
    let mut minus_un = scale(a, &u);
    minus_un[0] = S::zero();
    for c in minus_un.iter_mut() {
        *c = -c.clone();
    }
    let mut series = one(d);
    let mut power = one(d);
    for _ in 0..d {
        power = mul(&power, &minus_un);
        if power.iter().all(|c| c.is_zero()) {
            break;
        }
        series = add(&series, &power);
    }
    Ok(scale(&series, &u))
}

/// `a^e` by repeated squaring; negative exponents require a unit.
pub fn pow<S: Scalar>(a: &[S], e: i64) -> Result<Vec<S>, RingError> {
    let d = a.len() - 1;
    if e == 0 {
        return Ok(one(d));
    }
    let base = if e < 0 { invert(a)? } else { a.to_vec() };
    let mut exp = e.unsigned_abs();
    let mut acc = one(d);
    let mut sq = base;
    loop {
        if exp & 1 == 1 {
            acc = mul(&acc, &sq);
        }
        exp >>= 1;
        if exp == 0 {
            break;
        }
        sq = mul(&sq, &sq);
    }
    Ok(acc)
}
