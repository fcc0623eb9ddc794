//! Elements of cyclotomic fields `Q(zeta_n)` in the power basis modulo `Phi_n`.
//!
//! A [`CycNum`] is always stored in canonical form: the conductor is the
//! smallest `n` with the element in `Q(zeta_n)` (never `2 mod 4`), and the
//! coordinates are kept as an integer vector over a positive common
//! denominator with trivial content gcd. Structural equality is therefore
//! field equality.

mod embed;
mod roots;
mod text;

pub use embed::{house, house_cmp, house_le, embedding_table, HouseInterval};
pub use roots::{nth_root, sqrt_rational};

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{factor_u64, Rational};

/// Euler's totient.
pub fn phi(n: u64) -> u64 {
    factor_u64(n).iter().fold(n, |acc, &(p, _)| acc / p * (p - 1))
}

fn mobius(n: u64) -> i32 {
    let f = factor_u64(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

fn divisors(n: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    for (p, e) in factor_u64(n) {
        let cur = out.clone();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            out.extend(cur.iter().map(|d| d * pk));
        }
    }
    out.sort_unstable();
    out
}

/// Coefficients (ascending) of the `n`-th cyclotomic polynomial.
pub fn cyclotomic_polynomial(n: u64) -> Vec<i64> {
    assert!(n >= 1);
    let mut up = Vec::new();
    let mut down = Vec::new();
    for d in divisors(n) {
        match mobius(n / d) {
            1 => up.push(d),
            -1 => down.push(d),
            _ => {}
        }
    }
    let mut p: Vec<i64> = vec![1];
    for d in up {
        // multiply by X^d - 1
        let d = d as usize;
        let mut q = vec![0i64; p.len() + d];
        for (i, &c) in p.iter().enumerate() {
            q[i] = q[i].checked_sub(c).expect("cyclotomic coefficient overflow");
            q[i + d] = q[i + d].checked_add(c).expect("cyclotomic coefficient overflow");
        }
        p = q;
    }
    for d in down {
        // exact division by X^d - 1: p[i] = q[i-d] - q[i]
        let d = d as usize;
        let len = p.len() - d;
        let mut q = vec![0i64; len];
        for i in 0..len {
            let prev = if i >= d { q[i - d] } else { 0 };
            q[i] = prev - p[i];
        }
        p = q;
    }
    p
}

/// Reduces a dense integer vector in `Z[X]` modulo `X^n - 1` and then `Phi_n`.
fn reduce_int(mut v: Vec<BigInt>, n: u64) -> Vec<BigInt> {
    let n_us = n as usize;
    if v.len() > n_us {
        let tail = v.split_off(n_us);
        for (i, c) in tail.into_iter().enumerate() {
            v[i % n_us] += c;
        }
    }
    let cyc = cyclotomic_polynomial(n);
    let deg = cyc.len() - 1;
    let nz: Vec<(usize, i64)> =
        cyc[..deg].iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, &c)| (i, c)).collect();
    for top in (deg..v.len()).rev() {
        if v[top].is_zero() {
            continue;
        }
        let c = std::mem::take(&mut v[top]);
        let base = top - deg;
        for &(i, k) in &nz {
            v[base + i] -= &c * k;
        }
    }
    v.resize(deg, BigInt::zero());
    v
}

/// Element of a cyclotomic field, canonical (minimal conductor, reduced).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CycNum {
    conductor: u64,
    num: Vec<BigInt>,
    den: BigInt,
}

impl CycNum {
    pub fn zero() -> Self {
        CycNum { conductor: 1, num: vec![BigInt::zero()], den: BigInt::one() }
    }

    pub fn one() -> Self {
        CycNum::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        CycNum { conductor: 1, num: vec![BigInt::from(n)], den: BigInt::one() }
    }

    pub fn from_rational(q: &Rational) -> Self {
        CycNum { conductor: 1, num: vec![q.numer().clone()], den: q.denom().clone() }
    }

    /// `zeta_n^k` with `zeta_n = exp(2 pi i / n)`.
    pub fn zeta_pow(n: u64, k: i64) -> Self {
        assert!(n >= 1);
        let mut v = vec![BigInt::zero(); n as usize];
        v[k.rem_euclid(n as i64) as usize] = BigInt::one();
        CycNum::from_dense_int(n, v, BigInt::one())
    }

    pub fn zeta(n: u64) -> Self {
        CycNum::zeta_pow(n, 1)
    }

    /// Builds an element from power-basis coordinates in `Q(zeta_n)`; the
    /// vector may have any length (it is reduced modulo `Phi_n`).
    pub fn from_coeffs(n: u64, coeffs: &[Rational]) -> Self {
        assert!(n >= 1);
        let den = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let v = coeffs.iter().map(|c| c.numer() * (&den / c.denom())).collect();
        CycNum::from_dense_int(n, v, den)
    }

    /// `sum v_i zeta_n^i / den` for an arbitrary-length integer vector.
    pub(crate) fn from_dense_int(n: u64, v: Vec<BigInt>, den: BigInt) -> Self {
        let v = reduce_int(v, n);
        canonicalize(n, v, den)
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    /// Power-basis coordinates in `Q(zeta_conductor)`, length `phi(conductor)`.
    pub fn coeffs(&self) -> Vec<Rational> {
        self.num.iter().map(|c| Rational::new(c.clone(), self.den.clone())).collect()
    }

    pub fn coeff(&self, i: usize) -> Rational {
        Rational::new(self.num[i].clone(), self.den.clone())
    }

    /// Common denominator of the coordinates.
    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    pub(crate) fn int_parts(&self) -> (&[BigInt], &BigInt) {
        (&self.num, &self.den)
    }

    pub fn is_zero(&self) -> bool {
        self.conductor == 1 && self.num[0].is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.conductor == 1 && self.num[0].is_one() && self.den.is_one()
    }

    /// Total bit length of the stored integers (a size measure for orbit caps).
    pub fn bit_size(&self) -> u64 {
        self.num.iter().map(|c| c.bits()).sum::<u64>() + self.den.bits()
    }

    pub fn is_rational(&self) -> bool {
        self.conductor == 1
    }

    pub fn to_rational(&self) -> Option<Rational> {
        if self.conductor == 1 {
            Some(self.coeff(0))
        } else {
            None
        }
    }

    /// Integral in the ring of integers (the power basis is an integral basis).
    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }

    /// Dense integer coordinates of `self * den` lifted into `Q(zeta_big)`, `self.conductor | big`.
    fn lifted(&self, big: u64) -> Vec<BigInt> {
        if big == self.conductor {
            return self.num.clone();
        }
        let step = (big / self.conductor) as usize;
        let mut v = vec![BigInt::zero(); (self.num.len() - 1) * step + 1];
        for (i, c) in self.num.iter().enumerate() {
            v[i * step] = c.clone();
        }
        reduce_int(v, big)
    }

    /// Coordinates in `Q(zeta_big)` for a multiple `big` of the conductor.
    pub fn coeffs_in(&self, big: u64) -> Vec<Rational> {
        assert_eq!(big % self.conductor, 0, "conductor must divide the target field");
        self.lifted(big).into_iter().map(|c| Rational::new(c, self.den.clone())).collect()
    }

    pub fn neg(&self) -> Self {
        CycNum { conductor: self.conductor, num: self.num.iter().map(|c| -c).collect(), den: self.den.clone() }
    }

    pub fn add(&self, other: &Self) -> Self {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return other.clone();
        }
        let n = self.conductor.lcm(&other.conductor);
        let den = self.den.lcm(&other.den);
        let sa = &den / &self.den;
        let sb = &den / &other.den;
        let a = self.lifted(n);
        let b = other.lifted(n);
        let v = a.into_iter().zip(b).map(|(x, y)| x * &sa + y * &sb).collect();
        canonicalize(n, v, den)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return CycNum::zero();
        }
        if self.conductor == 1 {
            return other.scale_int(&self.num[0], &self.den);
        }
        if other.conductor == 1 {
            return self.scale_int(&other.num[0], &other.den);
        }
        let n = self.conductor.lcm(&other.conductor);
        let a = self.lifted(n);
        let b = other.lifted(n);
        let mut v = vec![BigInt::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    v[i + j] += x * y;
                }
            }
        }
        CycNum::from_dense_int(n, v, &self.den * &other.den)
    }

    fn scale_int(&self, n: &BigInt, d: &BigInt) -> Self {
        if n.is_zero() {
            return CycNum::zero();
        }
        let num: Vec<BigInt> = self.num.iter().map(|c| c * n).collect();
        let mut out = CycNum { conductor: self.conductor, num, den: &self.den * d };
        out.normalize_content();
        out
    }

    pub fn scale(&self, q: &Rational) -> Self {
        self.scale_int(q.numer(), q.denom())
    }

    fn normalize_content(&mut self) {
        let g = self.num.iter().fold(self.den.clone(), |acc, c| acc.gcd(c));
        if self.den.is_negative() {
            self.den = -&self.den;
            for c in &mut self.num {
                *c = -&*c;
            }
        }
        if !g.is_one() && !g.is_zero() {
            self.den = &self.den / &g;
            for c in &mut self.num {
                *c = &*c / &g;
            }
        }
    }

    /// Multiplicative inverse as the product of the other Galois conjugates over the norm.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.conductor == 1 {
            return Ok(CycNum::from_rational(&self.coeff(0).recip()));
        }
        let n = self.conductor;
        let mut conj = CycNum::one();
        for k in 2..n {
            if k.gcd(&n) == 1 {
                conj = conj.mul(&self.galois(k as i64));
            }
        }
        let norm = self.mul(&conj).to_rational().expect("norm is rational");
        Ok(conj.scale(&norm.recip()))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, k: i64) -> Result<Self> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        Ok(base.pow_u(k.unsigned_abs()))
    }

    pub fn pow_u(&self, mut k: u64) -> Self {
        let mut acc = CycNum::one();
        let mut b = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&b);
            }
            k >>= 1;
            if k > 0 {
                b = b.mul(&b);
            }
        }
        acc
    }

    /// Galois action `zeta_n -> zeta_n^k` (`k` coprime to the conductor).
    pub fn galois(&self, k: i64) -> Self {
        let n = self.conductor;
        if n == 1 {
            return self.clone();
        }
        let k = k.rem_euclid(n as i64) as u64;
        debug_assert_eq!(k.gcd(&n), 1);
        let mut v = vec![BigInt::zero(); n as usize];
        for (i, c) in self.num.iter().enumerate() {
            v[((i as u64 * k) % n) as usize] += c;
        }
        CycNum::from_dense_int(n, v, self.den.clone())
    }

    /// Complex conjugate.
    pub fn conj(&self) -> Self {
        self.galois(-1)
    }

    /// `self * conj(self)`.
    pub fn abs_sq(&self) -> Self {
        self.mul(&self.conj())
    }

    /// Field norm down to `Q`.
    pub fn norm(&self) -> Rational {
        let n = self.conductor;
        let mut acc = CycNum::one();
        for k in 1..n.max(2) {
            if k.gcd(&n) == 1 {
                acc = acc.mul(&self.galois(k as i64));
            }
        }
        acc.to_rational().expect("norm is rational")
    }

    /// Exact order if the element is a root of unity.
    pub fn root_of_unity_order(&self) -> Option<u64> {
        roots::root_of_unity_order(self)
    }
}

/// Least `D > 0` such that `D * v` has integer coordinates for every `v`.
pub fn clear_denominators(values: &[CycNum]) -> BigInt {
    values.iter().fold(BigInt::one(), |acc, v| acc.lcm(&v.den))
}

impl std::ops::Add for &CycNum {
    type Output = CycNum;
    fn add(self, o: &CycNum) -> CycNum {
        CycNum::add(self, o)
    }
}

impl std::ops::Sub for &CycNum {
    type Output = CycNum;
    fn sub(self, o: &CycNum) -> CycNum {
        CycNum::sub(self, o)
    }
}

impl std::ops::Mul for &CycNum {
    type Output = CycNum;
    fn mul(self, o: &CycNum) -> CycNum {
        CycNum::mul(self, o)
    }
}

impl std::ops::Neg for &CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        CycNum::neg(self)
    }
}

impl From<i64> for CycNum {
    fn from(n: i64) -> Self {
        CycNum::from_int(n)
    }
}

impl From<Rational> for CycNum {
    fn from(q: Rational) -> Self {
        CycNum::from_rational(&q)
    }
}

impl From<&Rational> for CycNum {
    fn from(q: &Rational) -> Self {
        CycNum::from_rational(q)
    }
}

/// Reduces a vector of length `phi(n)` to the minimal conductor.
fn canonicalize(mut n: u64, mut v: Vec<BigInt>, den: BigInt) -> CycNum {
    'outer: loop {
        if n == 1 {
            break;
        }
        for (p, e) in factor_u64(n) {
            let stripped = if e >= 2 { strip_square(n, p, &v) } else { strip_simple(n, p, &v) };
            if let Some(w) = stripped {
                n /= p;
                v = w;
                continue 'outer;
            }
        }
        break;
    }
    let mut out = CycNum { conductor: n, num: v, den };
    if out.num.iter().all(|c| c.is_zero()) {
        return CycNum::zero();
    }
    out.normalize_content();
    out
}

/// `p^2 | n`: the element lies in `Q(zeta_{n/p})` iff only exponents divisible by `p` occur.
fn strip_square(_n: u64, p: u64, v: &[BigInt]) -> Option<Vec<BigInt>> {
    let p = p as usize;
    if v.iter().enumerate().any(|(i, c)| i % p != 0 && !c.is_zero()) {
        return None;
    }
    Some(v.iter().step_by(p).cloned().collect())
}

/// `p || n`: split `zeta_n^i = zeta_m^{i u} zeta_p^{i w}` with `m = n/p` and test
/// invariance of the `zeta_p` components.
fn strip_simple(n: u64, p: u64, v: &[BigInt]) -> Option<Vec<BigInt>> {
    let m = n / p;
    let u = if m == 1 { 0 } else { crate::rational::inv_mod_u64(p % m, m) };
    let w = if p == 1 { 0 } else { crate::rational::inv_mod_u64(m % p, p) };
    let mut parts: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); m as usize]; p as usize];
    for (i, c) in v.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let i = i as u64;
        let a = if m == 1 { 0 } else { (i * u) % m };
        let b = (i * w) % p;
        parts[b as usize][a as usize] += c;
    }
    let parts: Vec<Vec<BigInt>> = parts.into_iter().map(|x| reduce_int(x, m)).collect();
    let last = &parts[p as usize - 1];
    for part in &parts[1..p as usize - 1] {
        if part != last {
            return None;
        }
    }
    Some(parts[0].iter().zip(last).map(|(a, b)| a - b).collect())
}

impl CycNum {
    /// Ordering of rational elements; `None` if either side is irrational.
    pub fn cmp_rational(&self, other: &Self) -> Option<Ordering> {
        Some(self.to_rational()?.cmp(&other.to_rational()?))
    }
}

#[cfg(test)]
mod tests;
