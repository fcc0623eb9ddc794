//! Roots of unity and radicals inside cyclotomic fields.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::CycNum;
use crate::rational::{factor_u64, rational_root, squarefree_split, Rational};

pub(super) fn root_of_unity_order(a: &CycNum) -> Option<u64> {
    if a.is_zero() || !a.is_integral() {
        return None;
    }
    if !a.abs_sq().is_one() {
        return None;
    }
    let n = a.conductor();
    let mstar = n.lcm(&2);
    if !a.pow_u(mstar).is_one() {
        return None;
    }
    let mut order = mstar;
    for (p, _) in factor_u64(mstar) {
        while order % p == 0 && a.pow_u(order / p).is_one() {
            order /= p;
        }
    }
    Some(order)
}

/// Legendre symbol `(a | p)` for an odd prime `p`.
fn legendre(a: u64, p: u64) -> i64 {
    let a = a % p;
    if a == 0 {
        return 0;
    }
    let r = BigUint::from(a).modpow(&BigUint::from((p - 1) / 2), &BigUint::from(p));
    if r.is_one() {
        1
    } else {
        -1
    }
}

/// Positive square root of a prime, as a cyclotomic number.
fn sqrt_prime(p: u64) -> CycNum {
    if p == 2 {
        return CycNum::zeta(8).add(&CycNum::zeta_pow(8, 7));
    }
    // quadratic Gauss sum g, with g^2 = (-1)^((p-1)/2) p
    let mut v = vec![BigInt::zero(); p as usize];
    for a in 1..p {
        v[a as usize] = BigInt::from(legendre(a, p));
    }
    let g = CycNum::from_dense_int(p, v, BigInt::one());
    if p % 4 == 1 {
        g
    } else {
        // g = i sqrt(p)
        g.mul(&CycNum::zeta_pow(4, 3))
    }
}

/// A square root of a rational in some `Q(zeta_n)` with `n <= conductor_bound`.
///
/// For positive input the returned root is the positive real one; for negative
/// input it is `i` times the positive root of the absolute value.
pub fn sqrt_rational(q: &Rational, conductor_bound: u64) -> Option<CycNum> {
    if q.is_zero() {
        return Some(CycNum::zero());
    }
    let nd = q.numer() * q.denom();
    let (square, primes) = squarefree_split(&nd)?;
    let mut need: u64 = if q.is_negative() { 4 } else { 1 };
    let mut small = Vec::new();
    for p in &primes {
        let p = p.to_u64()?;
        let c = if p == 2 { 8 } else if p % 4 == 1 { p } else { 4 * p };
        need = need.lcm(&c);
        if need > conductor_bound {
            return None;
        }
        small.push(p);
    }
    if need > conductor_bound {
        return None;
    }
    let mut r = CycNum::from_rational(&Rational::new(BigInt::from(square), q.denom().clone()));
    for p in small {
        r = r.mul(&sqrt_prime(p));
    }
    if q.is_negative() {
        r = r.mul(&CycNum::zeta(4));
    }
    debug_assert_eq!(r.mul(&r), CycNum::from_rational(q));
    Some(r)
}

/// A `k`-th root of `c` inside a cyclotomic field of conductor at most `conductor_bound`.
///
/// Succeeds for elements of the form (radical of a rational) times a root of
/// unity, which covers every element whose modulus power `c * conj(c)` is a
/// rational with a rational `k`-th or `2k`-th root. Returns `None` otherwise.
pub fn nth_root(c: &CycNum, k: u32, conductor_bound: u64) -> Option<CycNum> {
    assert!(k >= 1);
    if c.is_zero() {
        return Some(CycNum::zero());
    }
    if k == 1 {
        return Some(c.clone());
    }
    if let Some(q) = c.to_rational() {
        if let Some(r) = rational_root(&q, k) {
            return Some(CycNum::from_rational(&r));
        }
    }
    let norm = c.abs_sq().to_rational()?;
    let s = if let Some(r) = rational_root(&norm, 2 * k) {
        CycNum::from_rational(&r)
    } else {
        let r = rational_root(&norm, k)?;
        sqrt_rational(&r, conductor_bound)?
    };
    let modulus = s.pow_u(k as u64);
    let u = c.div(&modulus).ok()?;
    let m = u.root_of_unity_order()?;
    let j = (1..=m as i64).find(|&j| CycNum::zeta_pow(m, j) == u)?;
    let root = s.mul(&CycNum::zeta_pow(m * k as u64, j));
    if root.conductor() > conductor_bound {
        return None;
    }
    debug_assert_eq!(&root.pow_u(k as u64), c);
    Some(root)
}
