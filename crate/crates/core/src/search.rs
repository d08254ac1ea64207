//! Exhaustive witness search over coefficient boxes.
//!
//! Two modes with identical output. `BruteForce` evaluates the closed-form
//! total Chern class for every vector in the box. `Decomposed` exploits
//! per-generator separability of the top coefficient: each generator's
//! univariate factor is tabulated once per local tuple, and a target-sum
//! dynamic program over generators reconstructs exactly the vectors whose
//! contributions add up to the Euler characteristic. Partial sums are keyed
//! exactly as big integers, with a mod-4 residue prune in front.
//!
//! For even `n` the `b_j` slots couple generator `j` to generator 1: the
//! factor `(1 + (2n-2)!(x_1^{2n-1} - x_j^{2n-1}))^{b_j}` contributes
//! `(1 + (2n-2)! x^{2n-1})^{b_j}` to generator 1's univariate series and
//! `(1 - (2n-2)! x^{2n-1})^{b_j}` to generator j's (squared cross terms
//! exceed degree 2n), so generator 1's table is indexed by its own tuple
//! together with `Σ b_j`, and generator j's by its tuple and `b_j`.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::chern::factorial;
use crate::ktheory::{SacsCoefficients, ShapeError, Slot};
use crate::topology::{acs_criterion, invariants, WitnessRecord};
use crate::univariate;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("invalid search box: {0}")]
    InvalidBox(String),
    #[error("search space too large for {mode:?}: {size} exceeds the ceiling {limit}")]
    CeilingExceeded {
        mode: SearchMode,
        size: String,
        limit: u64,
    },
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl From<ShapeError> for SearchError {
    fn from(err: ShapeError) -> Self {
        SearchError::InvalidBox(err.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    BruteForce,
    Decomposed,
}

/// Guardrails for desk-scale runs: candidate count for brute force, total
/// table rows (and reachability-set size) for the decomposed mode.
#[derive(Debug, Clone, Copy)]
pub struct SearchLimits {
    pub brute_force_candidates: u64,
    pub decomposed_table_rows: u64,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            brute_force_candidates: 10_000_000,
            decomposed_table_rows: 1_000_000_000,
        }
    }
}

impl SearchLimits {
    /// One override value applied to both modes.
    pub fn with_ceiling(ceiling: u64) -> Self {
        SearchLimits {
            brute_force_candidates: ceiling,
            decomposed_table_rows: ceiling,
        }
    }
}

/// A coefficient box: every slot of the `(m, n)` shape ranges over
/// `[-bound, bound]`, giving `(2·bound + 1)^(m·n)` candidates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBox {
    m: u32,
    n: u32,
    bound: i64,
}

impl SearchBox {
    pub fn new(m: u32, n: u32, bound: i64) -> Result<Self, SearchError> {
        if m == 0 || n == 0 {
            return Err(SearchError::InvalidBox(format!(
                "m={m}, n={n}: both must be at least 1"
            )));
        }
        if bound < 0 {
            return Err(SearchError::InvalidBox(format!(
                "bound {bound} must be nonnegative"
            )));
        }
        Ok(SearchBox { m, n, bound })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn bound(&self) -> i64 {
        self.bound
    }

    pub fn slots(&self) -> Vec<Slot> {
        SacsCoefficients::slots_for(self.m, self.n).expect("validated at construction")
    }

    /// `(2B+1)^(#slots)`; `None` on overflow (which certainly exceeds any
    /// configured ceiling).
    pub fn candidate_count(&self) -> Option<u128> {
        let radix = 2 * (self.bound as u128) + 1;
        let mut count: u128 = 1;
        for _ in 0..self.slots().len() {
            count = count.checked_mul(radix)?;
        }
        Some(count)
    }

    /// The `index`-th coefficient vector in lexicographic slot order, the
    /// first slot most significant and values ascending from `-bound`.
    pub fn candidate(&self, index: u128) -> Option<SacsCoefficients> {
        let slots = self.slots();
        let radix = 2 * (self.bound as u128) + 1;
        let count = self.candidate_count()?;
        if index >= count {
            return None;
        }
        let mut values = vec![0i64; slots.len()];
        let mut rest = index;
        for pos in (0..slots.len()).rev() {
            let digit = (rest % radix) as i64;
            rest /= radix;
            values[pos] = digit - self.bound;
        }
        Some(
            SacsCoefficients::from_slot_values(self.m, self.n, slots.into_iter().zip(values))
                .expect("slots enumerate the valid shape"),
        )
    }
}

/// One row of a generator's contribution table: a local `a` tuple, the `b`
/// index (own `b_j` for `j >= 2`, coupled `Σ b_j` for generator 1 when `n`
/// is even, 0 otherwise), and the exact degree-2n coefficient of the
/// restricted univariate factor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContributionEntry {
    pub a: Vec<i64>,
    pub b: i64,
    pub contribution: BigInt,
}

#[derive(Debug, Clone)]
pub struct GeneratorTable {
    pub j: u32,
    /// The `k` values of this generator's `a` slots, ascending.
    pub a_slots: Vec<u32>,
    /// Range of the `b` index, inclusive.
    pub b_range: (i64, i64),
    pub entries: Vec<ContributionEntry>,
}

/// Per-generator contribution tables; selecting one entry per generator with
/// a consistent `b` coupling and summing the contributions reproduces the
/// top Chern coefficient of the assembled vector.
#[derive(Debug, Clone)]
pub struct ContributionTable {
    pub m: u32,
    pub n: u32,
    pub bound: i64,
    pub generators: Vec<GeneratorTable>,
}

fn a_slots_of_generator(m: u32, n: u32, j: u32) -> Vec<u32> {
    SacsCoefficients::slots_for(m, n)
        .expect("valid parameters")
        .into_iter()
        .filter_map(|slot| match slot {
            Slot::A { j: jj, k } if jj == j => Some(k),
            _ => None,
        })
        .collect()
}

fn b_range_of_generator(box_: &SearchBox, j: u32) -> (i64, i64) {
    if box_.n % 2 == 1 {
        (0, 0)
    } else if j == 1 {
        let span = i64::from(box_.m - 1) * box_.bound;
        (-span, span)
    } else {
        (-box_.bound, box_.bound)
    }
}

/// Exact number of table rows across all generators; `None` on overflow.
fn decomposed_rows(box_: &SearchBox) -> Option<u128> {
    let radix = 2 * (box_.bound as u128) + 1;
    let mut rows: u128 = 0;
    for j in 1..=box_.m {
        let a_len = a_slots_of_generator(box_.m, box_.n, j).len() as u32;
        let (lo, hi) = b_range_of_generator(box_, j);
        let b_count = (hi - lo + 1) as u128;
        let mut tuples: u128 = 1;
        for _ in 0..a_len {
            tuples = tuples.checked_mul(radix)?;
        }
        rows = rows.checked_add(tuples.checked_mul(b_count)?)?;
    }
    Some(rows)
}

/// Tabulates, for each generator, the degree-2n coefficient of its restricted
/// univariate factor for every local tuple in the box. Entries are in
/// lexicographic order of `(a tuple, b)`.
pub fn contribution_table(box_: &SearchBox) -> ContributionTable {
    let (m, n, bound) = (box_.m, box_.n, box_.bound);
    let d = (2 * n) as usize;
    let base: Vec<BigInt> = {
        let mut linear = univariate::zero::<BigInt>(d);
        linear[0] = BigInt::one();
        linear[1] = -BigInt::one();
        univariate::pow(&linear, i64::from(2 * n + 1)).expect("nonnegative power")
    };

    let mut generators = Vec::with_capacity(m as usize);
    for j in 1..=m {
        let a_slots = a_slots_of_generator(m, n, j);
        let b_range = b_range_of_generator(box_, j);

        // ratio powers ((1 + kx)/(1 - kx))^a for each slot k and each a
        let ratio_pows: Vec<Vec<Vec<BigInt>>> = a_slots
            .iter()
            .map(|&k| {
                let mut numer = univariate::zero::<BigInt>(d);
                numer[0] = BigInt::one();
                numer[1] = BigInt::from(k);
                let mut denom = univariate::zero::<BigInt>(d);
                denom[0] = BigInt::one();
                denom[1] = -BigInt::from(k);
                let ratio = univariate::mul(
                    &numer,
                    &univariate::invert(&denom).expect("constant term 1"),
                );
                (-bound..=bound)
                    .map(|a| univariate::pow(&ratio, a).expect("unit base"))
                    .collect()
            })
            .collect();

        // b factor: (1 +- (2n-2)! x^{2n-1})^b, sign + for the coupled
        // generator 1 share, - for the generator's own share
        let b_pows: Vec<Vec<BigInt>> = if box_.n.is_multiple_of(2) {
            let sign = if j == 1 {
                BigInt::one()
            } else {
                -BigInt::one()
            };
            let b_base = {
                let mut s = univariate::one::<BigInt>(d);
                s[d - 1] = sign * factorial(2 * n - 2);
                s
            };
            (b_range.0..=b_range.1)
                .map(|b| univariate::pow(&b_base, b).expect("unit base"))
                .collect()
        } else {
            vec![univariate::one::<BigInt>(d)]
        };

        // depth-first product over the a slots, then the b dimension
        struct TupleWalk<'a> {
            ratio_pows: &'a [Vec<Vec<BigInt>>],
            b_pows: &'a [Vec<BigInt>],
            b_range: (i64, i64),
            bound: i64,
            d: usize,
        }

        impl TupleWalk<'_> {
            fn descend(
                &self,
                depth: usize,
                tuple: &mut Vec<i64>,
                stack: &mut Vec<Vec<BigInt>>,
                entries: &mut Vec<ContributionEntry>,
            ) {
                if depth == tuple.len() {
                    let series = stack.last().expect("nonempty");
                    for (offset, b_pow) in self.b_pows.iter().enumerate() {
                        let product = univariate::mul(series, b_pow);
                        entries.push(ContributionEntry {
                            a: tuple.clone(),
                            b: self.b_range.0 + offset as i64,
                            contribution: product[self.d].clone(),
                        });
                    }
                    return;
                }
                for a in -self.bound..=self.bound {
                    tuple[depth] = a;
                    let factor = &self.ratio_pows[depth][(a + self.bound) as usize];
                    let series = univariate::mul(stack.last().expect("nonempty"), factor);
                    stack.push(series);
                    self.descend(depth + 1, tuple, stack, entries);
                    stack.pop();
                }
            }
        }

        let mut entries = Vec::new();
        let mut tuple = vec![-bound; a_slots.len()];
        let mut stack: Vec<Vec<BigInt>> = vec![base.clone()];
        let walk = TupleWalk {
            ratio_pows: &ratio_pows,
            b_pows: &b_pows,
            b_range,
            bound,
            d,
        };
        walk.descend(0, &mut tuple, &mut stack, &mut entries);

        generators.push(GeneratorTable {
            j,
            a_slots,
            b_range,
            entries,
        });
    }

    ContributionTable {
        m,
        n,
        bound,
        generators,
    }
}

impl ContributionTable {
    /// Assembles a full coefficient vector from one entry per generator.
    /// `choices[i]` indexes into `generators[i].entries`; the coupled `b`
    /// index of generator 1 must equal the sum of the others' `b` values.
    pub fn assemble(&self, choices: &[usize]) -> Result<SacsCoefficients, SearchError> {
        if choices.len() != self.generators.len() {
            return Err(SearchError::Internal(format!(
                "expected {} choices, got {}",
                self.generators.len(),
                choices.len()
            )));
        }
        let mut coeffs = SacsCoefficients::zero(self.m, self.n)?;
        let mut b_sum = 0i64;
        for (table, &choice) in self.generators.iter().zip(choices) {
            let entry = table
                .entries
                .get(choice)
                .ok_or_else(|| SearchError::Internal("choice out of range".into()))?;
            for (&k, &value) in table.a_slots.iter().zip(&entry.a) {
                coeffs.set_a(table.j, k, value)?;
            }
            if self.n.is_multiple_of(2) && table.j >= 2 {
                coeffs.set_b(table.j, entry.b)?;
                b_sum += entry.b;
            }
        }
        if self.n.is_multiple_of(2) {
            let coupled = self.generators[0].entries[choices[0]].b;
            if coupled != b_sum {
                return Err(SearchError::Internal(format!(
                    "coupled b index {coupled} does not match the selected sum {b_sum}"
                )));
            }
        }
        Ok(coeffs)
    }
}

fn mod4(v: &BigInt) -> u8 {
    let r: BigInt = v.mod_floor(&BigInt::from(4));
    let digits = r.to_u32_digits().1;
    digits.first().copied().unwrap_or(0) as u8
}

fn search_brute_force(
    box_: &SearchBox,
    limits: &SearchLimits,
) -> Result<Vec<WitnessRecord>, SearchError> {
    let count = box_.candidate_count().ok_or(SearchError::CeilingExceeded {
        mode: SearchMode::BruteForce,
        size: "more than u128".into(),
        limit: limits.brute_force_candidates,
    })?;
    if count > u128::from(limits.brute_force_candidates) {
        return Err(SearchError::CeilingExceeded {
            mode: SearchMode::BruteForce,
            size: count.to_string(),
            limit: limits.brute_force_candidates,
        });
    }
    let mut records: Vec<WitnessRecord> = (0..count as u64)
        .into_par_iter()
        .filter_map(|index| {
            let coeffs = box_.candidate(u128::from(index)).expect("index in range");
            let record = acs_criterion(&coeffs);
            record.verdict.then_some(record)
        })
        .collect();
    records.sort_by_key(|r| r.coeffs.coefficient_vector());
    Ok(records)
}

fn search_decomposed(
    box_: &SearchBox,
    limits: &SearchLimits,
) -> Result<Vec<WitnessRecord>, SearchError> {
    let rows = decomposed_rows(box_).ok_or(SearchError::CeilingExceeded {
        mode: SearchMode::Decomposed,
        size: "more than u128".into(),
        limit: limits.decomposed_table_rows,
    })?;
    if rows > u128::from(limits.decomposed_table_rows) {
        return Err(SearchError::CeilingExceeded {
            mode: SearchMode::Decomposed,
            size: rows.to_string(),
            limit: limits.decomposed_table_rows,
        });
    }
    let table = contribution_table(box_);
    let m = box_.m as usize;
    let target = BigInt::from(
        invariants(box_.m, box_.n)
            .expect("validated at construction")
            .euler,
    );

    // reach[g] = set of (sum of contributions, sum of b) over generators
    // g..=m; generators are 1-indexed, reach has m + 2 levels
    let mut reach: Vec<HashSet<(BigInt, i64)>> = vec![HashSet::new(); m + 2];
    reach[m + 1].insert((BigInt::zero(), 0));
    for g in (2..=m).rev() {
        let mut level = HashSet::new();
        for (sum, b) in &reach[g + 1] {
            for entry in &table.generators[g - 1].entries {
                level.insert((sum + &entry.contribution, b + entry.b));
            }
            if level.len() as u128 > u128::from(limits.decomposed_table_rows) {
                return Err(SearchError::CeilingExceeded {
                    mode: SearchMode::Decomposed,
                    size: format!("reachability set at generator {g} past {}", level.len()),
                    limit: limits.decomposed_table_rows,
                });
            }
        }
        reach[g] = level;
    }
    // mod-4 shadows of the reach sets, checked before the exact lookup
    let residues: Vec<HashSet<(u8, i64)>> = reach
        .iter()
        .map(|set| set.iter().map(|(s, b)| (mod4(s), *b)).collect())
        .collect();

    struct TargetSumDfs<'a> {
        m: usize,
        table: &'a ContributionTable,
        reach: &'a [HashSet<(BigInt, i64)>],
        residues: &'a [HashSet<(u8, i64)>],
    }

    impl TargetSumDfs<'_> {
        fn enumerate(
            &self,
            g: usize,
            needed: BigInt,
            needed_b: i64,
            choices: &mut Vec<usize>,
            found: &mut Vec<Vec<usize>>,
        ) {
            if g > self.m {
                if needed.is_zero() && needed_b == 0 {
                    found.push(choices.clone());
                }
                return;
            }
            for (idx, entry) in self.table.generators[g - 1].entries.iter().enumerate() {
                let rem = &needed - &entry.contribution;
                let rem_b = needed_b - entry.b;
                if !self.residues[g + 1].contains(&(mod4(&rem), rem_b)) {
                    continue;
                }
                if !self.reach[g + 1].contains(&(rem.clone(), rem_b)) {
                    continue;
                }
                choices.push(idx);
                self.enumerate(g + 1, rem, rem_b, choices, found);
                choices.pop();
            }
        }
    }

    let dfs = TargetSumDfs {
        m,
        table: &table,
        reach: &reach,
        residues: &residues,
    };
    let mut found: Vec<Vec<usize>> = Vec::new();
    for (idx, entry) in table.generators[0].entries.iter().enumerate() {
        let needed = &target - &entry.contribution;
        let needed_b = entry.b;
        if m == 1 {
            if needed.is_zero() && needed_b == 0 {
                found.push(vec![idx]);
            }
            continue;
        }
        if !residues[2].contains(&(mod4(&needed), needed_b)) {
            continue;
        }
        if !reach[2].contains(&(needed.clone(), needed_b)) {
            continue;
        }
        let mut choices = vec![idx];
        dfs.enumerate(2, needed, needed_b, &mut choices, &mut found);
    }

    let mut records = Vec::with_capacity(found.len());
    for choices in found {
        let coeffs = table.assemble(&choices)?;
        let record = acs_criterion(&coeffs);
        if !record.verdict {
            return Err(SearchError::Internal(format!(
                "decomposed candidate {} fails re-verification: c_top = {}, chi = {}",
                coeffs.describe(),
                record.c_top,
                record.chi
            )));
        }
        records.push(record);
    }
    records.sort_by_key(|r| r.coeffs.coefficient_vector());
    Ok(records)
}

/// All vectors in the box whose top Chern coefficient equals the Euler
/// characteristic, in lexicographic order of the coefficient vector. The two
/// modes return identical sequences.
pub fn search_witnesses(
    box_: &SearchBox,
    mode: SearchMode,
    limits: &SearchLimits,
) -> Result<Vec<WitnessRecord>, SearchError> {
    match mode {
        SearchMode::BruteForce => search_brute_force(box_, limits),
        SearchMode::Decomposed => search_decomposed(box_, limits),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chern::top_chern_of_sacs;
    use proptest::prelude::*;

    fn int(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn box_validation_and_counting() {
        assert!(SearchBox::new(0, 1, 2).is_err());
        assert!(SearchBox::new(1, 1, -1).is_err());
        let b = SearchBox::new(3, 1, 2).unwrap();
        assert_eq!(b.candidate_count(), Some(125));
        let b = SearchBox::new(2, 2, 3).unwrap();
        assert_eq!(b.candidate_count(), Some(2401));
    }

    #[test]
    fn candidates_enumerate_lexicographically() {
        let b = SearchBox::new(2, 1, 1).unwrap();
        let first = b.candidate(0).unwrap();
        assert_eq!(first.coefficient_vector(), vec![-1, -1]);
        let last = b.candidate(8).unwrap();
        assert_eq!(last.coefficient_vector(), vec![1, 1]);
        assert!(b.candidate(9).is_none());
        let mut previous = first.coefficient_vector();
        for idx in 1..9 {
            let v = b.candidate(idx).unwrap().coefficient_vector();
            assert!(v > previous);
            previous = v;
        }
    }

    #[test]
    fn contribution_values_n1() {
        // coefficient of x^2 in (1-x)^{3-a}(1+x)^a
        let b = SearchBox::new(3, 1, 2).unwrap();
        let table = contribution_table(&b);
        let expected = [(-2i64, 23i64), (-1, 11), (0, 3), (1, -1), (2, -1)];
        for gen in &table.generators {
            assert_eq!(gen.entries.len(), 5);
            for entry in &gen.entries {
                let g = expected
                    .iter()
                    .find(|(a, _)| *a == entry.a[0])
                    .expect("value in range")
                    .1;
                assert_eq!(entry.contribution, int(g), "a = {}", entry.a[0]);
            }
        }
    }

    #[test]
    fn contribution_values_n2() {
        let b = SearchBox::new(2, 2, 2).unwrap();
        let table = contribution_table(&b);
        // all-zero local tuple contributes 2n + 1 = 5
        let gen1 = &table.generators[0];
        let zero_entry = gen1
            .entries
            .iter()
            .find(|e| e.a.iter().all(|&v| v == 0) && e.b == 0)
            .unwrap();
        assert_eq!(zero_entry.contribution, int(5));
        // a^1 = 2 (everything else zero) contributes 2n - 3 = 1
        let witness_entry = gen1
            .entries
            .iter()
            .find(|e| e.a == vec![2, 0] && e.b == 0)
            .unwrap();
        assert_eq!(witness_entry.contribution, int(1));
        let gen2 = &table.generators[1];
        let witness_entry = gen2
            .entries
            .iter()
            .find(|e| e.a == vec![2] && e.b == 0)
            .unwrap();
        assert_eq!(witness_entry.contribution, int(1));
    }

    #[test]
    fn contributions_sum_to_top_chern() {
        for (m, n, bound) in [(2u32, 1u32, 2i64), (3, 1, 1), (2, 2, 1)] {
            let b = SearchBox::new(m, n, bound).unwrap();
            let table = contribution_table(&b);
            // walk a deterministic sample of consistent selections
            let mut picks = Vec::new();
            for skew in 0..5usize {
                let mut choices: Vec<usize> = Vec::new();
                let mut b_sum = 0i64;
                for gen in table.generators.iter().skip(1) {
                    let idx = (skew * 7 + gen.j as usize) % gen.entries.len();
                    choices.push(idx);
                    b_sum += gen.entries[idx].b;
                }
                // pick a generator-1 entry with the matching coupled b
                let idx1 = table.generators[0]
                    .entries
                    .iter()
                    .position(|e| {
                        e.b == b_sum
                            && e.a
                                .iter()
                                .all(|&v| v == ((skew as i64) % (2 * bound + 1)) - bound)
                    })
                    .expect("entry exists for every (tuple, b sum)");
                let mut all = vec![idx1];
                all.extend(choices);
                picks.push(all);
            }
            for choices in picks {
                let coeffs = table.assemble(&choices).unwrap();
                let total: BigInt = choices
                    .iter()
                    .zip(&table.generators)
                    .map(|(&c, g)| g.entries[c].contribution.clone())
                    .sum();
                assert_eq!(total, top_chern_of_sacs(&coeffs), "m={m} n={n}");
            }
        }
    }

    #[test]
    fn search_m3_n1_finds_exactly_six() {
        let b = SearchBox::new(3, 1, 2).unwrap();
        let limits = SearchLimits::default();
        let brute = search_witnesses(&b, SearchMode::BruteForce, &limits).unwrap();
        let decomposed = search_witnesses(&b, SearchMode::Decomposed, &limits).unwrap();
        assert_eq!(brute, decomposed);
        assert_eq!(brute.len(), 6);
        let vectors: Vec<Vec<i64>> = brute
            .iter()
            .map(|r| r.coeffs.coefficient_vector())
            .collect();
        assert_eq!(
            vectors,
            vec![
                vec![0, 0, 1],
                vec![0, 0, 2],
                vec![0, 1, 0],
                vec![0, 2, 0],
                vec![1, 0, 0],
                vec![2, 0, 0],
            ]
        );
        for record in &brute {
            assert!(record.verdict);
            let fresh = acs_criterion(&record.coeffs);
            assert_eq!(&fresh, record);
        }
    }

    #[test]
    fn search_even_m_is_empty() {
        let limits = SearchLimits::default();
        for n in [1u32, 2] {
            let b = SearchBox::new(2, n, 3).unwrap();
            for mode in [SearchMode::BruteForce, SearchMode::Decomposed] {
                let found = search_witnesses(&b, mode, &limits).unwrap();
                assert!(found.is_empty(), "n={n} mode={mode:?}");
            }
        }
    }

    #[test]
    fn searched_values_satisfy_the_congruence() {
        for (m, n, bound) in [(3u32, 1u32, 2i64), (2, 1, 3), (2, 2, 1)] {
            let b = SearchBox::new(m, n, bound).unwrap();
            let count = b.candidate_count().unwrap();
            let expected = if n % 2 == 0 {
                i64::from(m).rem_euclid(4)
            } else {
                (-i64::from(m)).rem_euclid(4)
            };
            for idx in 0..count {
                let coeffs = b.candidate(idx).unwrap();
                let c = top_chern_of_sacs(&coeffs);
                assert_eq!(c.mod_floor(&int(4)), int(expected), "m={m} n={n} idx={idx}");
            }
        }
    }

    #[test]
    fn boxes_containing_the_explicit_witness_find_it() {
        let limits = SearchLimits::default();
        for (m, n) in [(1u32, 1u32), (1, 2), (3, 1), (3, 2)] {
            let witness = crate::topology::explicit_witness(m, n).unwrap();
            let b = SearchBox::new(m, n, 2).unwrap();
            let found = search_witnesses(&b, SearchMode::Decomposed, &limits).unwrap();
            assert!(
                found.iter().any(|r| r.coeffs == witness),
                "m={m} n={n} missing the explicit witness"
            );
        }
    }

    #[test]
    fn mode_equivalence_on_an_even_n_box_with_couplings() {
        // witnesses here carry nonzero b values, exercising the coupled
        // generator-1 table and the b-sum threading of the reconstruction
        let b = SearchBox::new(3, 2, 2).unwrap();
        let limits = SearchLimits::default();
        let brute = search_witnesses(&b, SearchMode::BruteForce, &limits).unwrap();
        let decomposed = search_witnesses(&b, SearchMode::Decomposed, &limits).unwrap();
        assert_eq!(brute, decomposed);
        assert_eq!(brute.len(), 166);
        assert!(brute.iter().any(|r| r.coeffs.b(2) != 0));
        let witness = crate::topology::explicit_witness(3, 2).unwrap();
        assert!(brute.iter().any(|r| r.coeffs == witness));
    }

    #[test]
    fn ceiling_is_enforced() {
        let b = SearchBox::new(3, 1, 2).unwrap();
        let limits = SearchLimits::with_ceiling(10);
        assert!(matches!(
            search_witnesses(&b, SearchMode::BruteForce, &limits),
            Err(SearchError::CeilingExceeded { .. })
        ));
        assert!(matches!(
            search_witnesses(&b, SearchMode::Decomposed, &limits),
            Err(SearchError::CeilingExceeded { .. })
        ));
    }

    #[test]
    fn deterministic_across_worker_counts() {
        let b = SearchBox::new(3, 1, 2).unwrap();
        let limits = SearchLimits::default();
        let default_pool = search_witnesses(&b, SearchMode::BruteForce, &limits).unwrap();
        let single = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| search_witnesses(&b, SearchMode::BruteForce, &limits).unwrap());
        assert_eq!(default_pool, single);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(8))]

        #[test]
        fn mode_equivalence_on_random_boxes(
            m in 1u32..=3,
            n in 1u32..=2,
            bound in 0i64..=1,
        ) {
            let b = SearchBox::new(m, n, bound).unwrap();
            let limits = SearchLimits::default();
            let brute = search_witnesses(&b, SearchMode::BruteForce, &limits).unwrap();
            let decomposed = search_witnesses(&b, SearchMode::Decomposed, &limits).unwrap();
            prop_assert_eq!(brute, decomposed);
        }
    }
}
