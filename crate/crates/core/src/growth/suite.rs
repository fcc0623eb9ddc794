//! Seeded randomized suites for strict growth and the degenerate cases.
//!
//! Case `i` of a suite draws from a ChaCha stream selected by `i`, so every
//! case is reproducible on its own and the suites shard across threads
//! without changing their results.

use num_bigint::BigInt;
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{
    degenerate_behavior, padic_bound_exponent, start_condition, verify_growth, AbsValue, DegenerateClass, Place,
    Precision, DEGENERATE_STEPS,
};
use crate::cyclo::CycNum;
use crate::poly::Poly;
use crate::rational::{format_rational, Rational};
use crate::ratmap::RatMap;

const PRIMES: [u64; 15] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteSummary {
    pub name: String,
    pub cases: usize,
    pub passed: usize,
    /// Descriptions of the failing cases (map, start, place, reason).
    pub failures: Vec<String>,
}

impl SuiteSummary {
    pub fn all_passed(&self) -> bool {
        self.passed == self.cases
    }
}

fn case_rng(seed: u64, i: usize) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(i as u64);
    r
}

fn small_rational(rng: &mut impl Rng, height: i64) -> Rational {
    let n = rng.gen_range(-height..=height);
    let d = rng.gen_range(1..=height);
    Rational::new(n.into(), d.into())
}

/// A rational `u` with numerator and denominator prime to `p`.
fn unit_rational(rng: &mut impl Rng, p: u64, height: i64) -> Rational {
    loop {
        let n = rng.gen_range(1..=height) * if rng.gen_bool(0.5) { 1 } else { -1 };
        let d = rng.gen_range(1..=height);
        if n.unsigned_abs() % p != 0 && d as u64 % p != 0 {
            return Rational::new(n.into(), d.into());
        }
    }
}

fn p_power(p: u64, k: i64) -> Rational {
    crate::rational::pow_i(&Rational::from_integer(BigInt::from(p)), k)
}

/// Monic polynomial of degree `deg` with coefficients from `coeff`.
fn monic(rng: &mut ChaCha8Rng, deg: u64, mut coeff: impl FnMut(&mut ChaCha8Rng) -> Rational) -> Poly {
    let mut c: Vec<CycNum> = (0..deg).map(|_| CycNum::from_rational(&coeff(rng))).collect();
    c.push(CycNum::one());
    Poly::from_dense(c)
}

fn sparse_rational(rng: &mut ChaCha8Rng) -> Rational {
    if rng.gen_bool(0.3) {
        Rational::from_integer(0.into())
    } else {
        small_rational(rng, 20)
    }
}

/// Reduced monic map with the requested degrees, resampling on cancellation.
fn monic_map(rng: &mut ChaCha8Rng, d: u64, e: u64, mut coeff: impl FnMut(&mut ChaCha8Rng) -> Rational) -> RatMap {
    loop {
        let f = monic(rng, d, &mut coeff);
        let g = monic(rng, e, &mut coeff);
        let h = RatMap::new(f, g).expect("nonzero denominator");
        if h.d() == d && h.e() == e && h.is_monic() {
            return h;
        }
    }
}

fn describe(h: &RatMap, a: &Rational, place: Place) -> String {
    format!("h = {h}, a = {}, {place:?}", format_rational(a))
}

fn run<F>(name: &str, cases: usize, seed: u64, case: F) -> SuiteSummary
where
    F: Fn(usize, &mut ChaCha8Rng) -> std::result::Result<(), String> + Sync,
{
    let results: Vec<std::result::Result<(), String>> =
        (0..cases).into_par_iter().map(|i| case(i, &mut case_rng(seed, i))).collect();
    let failures: Vec<String> =
        results.into_iter().enumerate().filter_map(|(i, r)| r.err().map(|e| format!("case {i}: {e}"))).collect();
    SuiteSummary { name: name.to_string(), cases, passed: cases - failures.len(), failures }
}

/// Random monic maps over Q with `d - e > 1` and p-adic starts satisfying
/// the start condition: strict increase and `|h^(n)(a)|_p = |a|_p^((d-e)^n)`.
pub fn padic_suite(cases: usize, steps: usize, seed: u64) -> SuiteSummary {
    run("p-adic growth", cases, seed, |i, rng| {
        let p = PRIMES[rng.gen_range(0..PRIMES.len())];
        let h = if i % 2 == 0 {
            let d = rng.gen_range(2..=5);
            monic_map(rng, d, 0, sparse_rational)
        } else {
            let d = rng.gen_range(3..=5);
            let e = rng.gen_range(1..=d - 2);
            monic_map(rng, d, e, sparse_rational)
        };
        let k0 = padic_bound_exponent(&h, p) + 1 + rng.gen_range(0..3);
        let a = unit_rational(rng, p, 20) / p_power(p, k0);
        let place = Place::PAdic { p };
        let rep = verify_growth(&h, &CycNum::from_rational(&a), place, steps, Precision::default())
            .map_err(|e| format!("{}: {e}", describe(&h, &a, place)))?;
        let de = (h.d() - h.e()) as i64;
        let closed = rep.values.iter().enumerate().all(|(n, v)| {
            matches!(v, AbsValue::PAdic { exponent, .. } if Some(*exponent) == de.checked_pow(n as u32).map(|x| x * k0))
        });
        if rep.strictly_increasing && rep.closed_form_holds == Some(true) && closed && rep.values.len() == steps + 1 {
            Ok(())
        } else {
            Err(format!("{}: report {:?}", describe(&h, &a, place), rep.first_violation))
        }
    })
}

/// Coefficients drawn from `Q(zeta_n)` for small `n`.
fn cyclotomic_coeff(rng: &mut ChaCha8Rng, n: u64) -> CycNum {
    let q = sparse_rational(rng);
    let j = rng.gen_range(0..n as i64);
    CycNum::zeta_pow(n, j).scale(&q)
}

/// Random monic maps with `d - e > 1` (some with cyclotomic coefficients)
/// and rational starts beyond `1 + sum |a_i| + sum |b_j|` at a random
/// embedding: strict increase of `|sigma(h^(n)(a))|`.
pub fn archimedean_suite(cases: usize, steps: usize, seed: u64) -> SuiteSummary {
    run("archimedean growth", cases, seed, |i, rng| {
        let n = [1u64, 1, 3, 4, 5][i % 5];
        let (d, e) = if i % 2 == 0 {
            (rng.gen_range(2..=5), 0)
        } else {
            let d = rng.gen_range(3..=5);
            (d, rng.gen_range(1..=d - 2))
        };
        let h = loop {
            let mut part = |deg: u64| {
                let mut c: Vec<CycNum> = (0..deg).map(|_| cyclotomic_coeff(rng, n)).collect();
                c.push(CycNum::one());
                Poly::from_dense(c)
            };
            let (f, g) = (part(d), part(e));
            let h = RatMap::new(f, g).expect("nonzero denominator");
            if h.d() == d && h.e() == e && h.is_monic() {
                break h;
            }
        };
        let cond = h.conductor();
        let ks: Vec<u64> = (1..=cond.max(1)).filter(|k| k.gcd(&cond) == 1).collect();
        let k = ks[rng.gen_range(0..ks.len())];
        let (_, sum) = super::coefficient_sum(&h, k, cond, 64);
        let bound = sum.hi.to_rational();
        let extra = Rational::new(rng.gen_range(1..=40).into(), rng.gen_range(1..=8).into());
        let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
        let a = (bound + extra) * Rational::from_integer(sign.into());
        let place = Place::Archimedean { k };
        let ac = CycNum::from_rational(&a);
        match start_condition(&h, &ac, place, Precision::default()) {
            Ok(true) => {}
            other => return Err(format!("{}: start condition {other:?}", describe(&h, &a, place))),
        }
        let rep = verify_growth(&h, &ac, place, steps, Precision::default())
            .map_err(|e| format!("{}: {e}", describe(&h, &a, place)))?;
        if rep.strictly_increasing && rep.values.len() == steps + 1 {
            Ok(())
        } else {
            Err(format!("{}: violation at {:?}", describe(&h, &a, place), rep.first_violation))
        }
    })
}

/// Random maps of one degenerate class with qualifying starts; each must be
/// classified as `class` with verified values over six steps.
pub fn degenerate_suite(class: DegenerateClass, cases: usize, seed: u64) -> SuiteSummary {
    let name = format!("degenerate {class:?}");
    run(&name, cases, seed, |_, rng| {
        let p = PRIMES[rng.gen_range(0..PRIMES.len())];
        let pq = Rational::from_integer(BigInt::from(p));
        let h = match class {
            DegenerateClass::ConstantOne => {
                let d = rng.gen_range(1..=4);
                // non-leading coefficients divisible by p
                monic_map(rng, d, d, |r| {
                    if r.gen_bool(0.3) {
                        Rational::from_integer(0.into())
                    } else {
                        unit_rational(r, p, 20) * &pq
                    }
                })
            }
            DegenerateClass::ConstantAbs => {
                let e = rng.gen_range(0..=3);
                monic_map(rng, e + 1, e, sparse_rational)
            }
            DegenerateClass::LeadingRatio => loop {
                let e = rng.gen_range(2..=4);
                let d = rng.gen_range(1..e);
                let const_term = |r: &mut ChaCha8Rng| unit_rational(r, p, 20) / p_power(p, r.gen_range(1..=3));
                let part = |r: &mut ChaCha8Rng, deg: u64| {
                    let mut c = vec![CycNum::from_rational(&const_term(r))];
                    c.extend((1..deg).map(|_| CycNum::from_rational(&sparse_rational(r))));
                    c.push(CycNum::one());
                    Poly::from_dense(c)
                };
                let (f, g) = (part(rng, d), part(rng, e));
                let h = RatMap::new(f, g).expect("nonzero denominator");
                if h.d() == d && h.e() == e && h.is_monic() {
                    break h;
                }
            },
            DegenerateClass::NotDegenerate => {
                let d = rng.gen_range(2..=5);
                monic_map(rng, d, 0, sparse_rational)
            }
        };
        let k0 = padic_bound_exponent(&h, p) + 1 + rng.gen_range(0..3);
        let a = unit_rational(rng, p, 20) / p_power(p, k0);
        let place = Place::PAdic { p };
        let rep = degenerate_behavior(&h, &a, p, Precision::default())
            .map_err(|e| format!("{}: {e}", describe(&h, &a, place)))?;
        let full = class == DegenerateClass::NotDegenerate || class == DegenerateClass::LeadingRatio || rep.values.len() == DEGENERATE_STEPS + 1;
        if rep.class == class && rep.verified && full {
            Ok(())
        } else {
            Err(format!("{}: got {:?}, verified {}", describe(&h, &a, place), rep.class, rep.verified))
        }
    })
}

/// All three degenerate classes.
pub fn degenerate_suites(cases: usize, seed: u64) -> Vec<SuiteSummary> {
    [DegenerateClass::ConstantOne, DegenerateClass::ConstantAbs, DegenerateClass::LeadingRatio]
        .into_iter()
        .map(|c| degenerate_suite(c, cases, seed))
        .collect()
}
