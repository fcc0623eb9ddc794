//! Term counts of formal iterates, exact where expansion is cheap and
//! certified lower bounds (via [`super::modular`]) beyond that.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use super::modular::NttPrime;
use super::RatMap;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparsityOptions {
    /// Iterates up to this degree are expanded exactly.
    pub exact_degree_limit: u64,
    /// Iterates up to this degree are counted modulo primes.
    pub modular_degree_limit: u64,
}

impl Default for SparsityOptions {
    fn default() -> Self {
        SparsityOptions { exact_degree_limit: 1 << 11, modular_degree_limit: 1 << 21 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparsityRow {
    pub n: u32,
    /// Degree of the iterate as a decimal string.
    pub degree: String,
    pub numerator_terms: usize,
    pub denominator_terms: usize,
    pub total_terms: usize,
    /// `true` for exact counts, `false` for certified lower bounds.
    pub exact: bool,
    /// Whether the term-count lower bound holds for this row.
    pub bound_satisfied: bool,
}

/// Exact test of `count >= max(1, ((n-2) ln d - ln 2016) / ln 5)`, i.e.
/// `count >= 1` and `5^count * 2016 >= d^(n-2)`.
pub fn fz_check(d: u64, n: u32, count: usize) -> bool {
    if count == 0 {
        return false;
    }
    if n < 2 {
        return true;
    }
    let lhs = num_traits::pow(BigUint::from(5u32), count) * BigUint::from(2016u32);
    let rhs = num_traits::pow(BigUint::from(d), (n - 2) as usize);
    lhs >= rhs
}

/// Term counts of `h^(n)` for `n = 1..=n_max`.
pub fn iterate_term_counts(h: &RatMap, n_max: u32, opts: &SparsityOptions) -> Result<Vec<SparsityRow>> {
    let dd = h.degree();
    let deg_at = |n: u32| (dd as u128).checked_pow(n).unwrap_or(u128::MAX);
    let mut rows = Vec::new();
    let mut it = RatMap::identity();
    let mut n = 1;
    while n <= n_max && deg_at(n) <= opts.exact_degree_limit as u128 {
        it = h.compose(&it);
        let (a, b) = it.term_count();
        rows.push(row(dd, n, a, b, true));
        n += 1;
    }
    if n > n_max {
        return Ok(rows);
    }
    if deg_at(n_max) > opts.modular_degree_limit as u128 {
        return Err(Error::ResourceCap(format!(
            "iterate {n_max} has degree {}, above the counting limit {}",
            deg_at(n_max),
            opts.modular_degree_limit
        )));
    }
    let k = (128 - deg_at(n_max).leading_zeros()).max(1) + 1;
    let mut best: Option<Vec<(usize, usize)>> = None;
    let mut skip = 0;
    let mut used = 0;
    while used < 2 {
        let prime = NttPrime::find(h.conductor(), k, skip)
            .ok_or_else(|| Error::ResourceCap("no suitable word-size prime".into()))?;
        skip += 1;
        if skip > 64 {
            break;
        }
        let Some(counts) = prime.iterate_counts(h, n_max) else { continue };
        used += 1;
        best = Some(match best {
            None => counts,
            Some(b) => b.iter().zip(&counts).map(|(x, y)| (x.0.max(y.0), x.1.max(y.1))).collect(),
        });
    }
    let best = best.ok_or_else(|| Error::ResourceCap("no prime avoids the coefficient denominators".into()))?;
    for m in n..=n_max {
        let (a, b) = best[m as usize - 1];
        rows.push(row(dd, m, a, b, false));
    }
    Ok(rows)
}

fn row(dd: u64, n: u32, a: usize, b: usize, exact: bool) -> SparsityRow {
    let degree = num_traits::pow(BigUint::from(dd), n as usize).to_string();
    SparsityRow {
        n,
        degree,
        numerator_terms: a,
        denominator_terms: b,
        total_terms: a + b,
        exact,
        bound_satisfied: fz_check(dd, n, a + b),
    }
}
