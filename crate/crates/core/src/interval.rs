//! Certified multi-precision interval arithmetic.
//!
//! Endpoints are dyadic numbers `m * 2^e` with an arbitrary-precision
//! mantissa. Every operation rounds the lower endpoint towards -inf and the
//! upper endpoint towards +inf, so the true value always stays enclosed.
//! Transcendental constants (pi, cos/sin of rational angles, ln of rationals)
//! are computed from alternating or geometric series with explicit tail
//! bounds.

use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Round {
    Down,
    Up,
}

impl Round {
    fn flip(self) -> Round {
        match self {
            Round::Down => Round::Up,
            Round::Up => Round::Down,
        }
    }
}

/// `mant * 2^exp`, normalised so the mantissa is odd (or the value is 0 with exp 0).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

fn shr_round(m: &BigInt, s: u64, dir: Round) -> BigInt {
    if s == 0 {
        return m.clone();
    }
    let mag = m.magnitude();
    let q = mag >> s;
    let exact = (&q << s) == *mag;
    // truncation towards zero, then fix up by direction and sign
    let away = !exact
        && match (m.sign(), dir) {
            (Sign::Minus, Round::Down) | (Sign::Plus, Round::Up) => true,
            _ => false,
        };
    let q = if away { q + 1u32 } else { q };
    BigInt::from_biguint(if m.is_negative() { Sign::Minus } else { Sign::Plus }, q)
}

fn div_round_int(n: &BigInt, d: &BigInt, dir: Round) -> BigInt {
    match dir {
        Round::Down => n.div_floor(d),
        Round::Up => -((-n).div_floor(d)),
    }
}

impl Dyadic {
    pub fn zero() -> Self {
        Dyadic { mant: BigInt::zero(), exp: 0 }
    }

    pub fn new(mant: BigInt, exp: i64) -> Self {
        let mut d = Dyadic { mant, exp };
        d.normalize();
        d
    }

    pub fn from_int(n: i64) -> Self {
        Dyadic::new(BigInt::from(n), 0)
    }

    fn normalize(&mut self) {
        if self.mant.is_zero() {
            self.exp = 0;
            return;
        }
        let tz = self.mant.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.mant >>= tz;
            self.exp += tz as i64;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn signum(&self) -> i32 {
        match self.mant.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    /// Exponent of the leading bit plus one (`|x| < 2^top`).
    fn top(&self) -> i64 {
        self.exp + self.mant.bits() as i64
    }

    pub fn round(&self, prec: u32, dir: Round) -> Dyadic {
        let bits = self.mant.bits();
        if bits <= prec as u64 {
            return self.clone();
        }
        let s = bits - prec as u64;
        Dyadic::new(shr_round(&self.mant, s, dir), self.exp + s as i64)
    }

    pub fn neg(&self) -> Dyadic {
        Dyadic { mant: -&self.mant, exp: self.exp }
    }

    pub fn abs(&self) -> Dyadic {
        Dyadic { mant: self.mant.abs(), exp: self.exp }
    }

    fn exact_add(a: &Dyadic, b: &Dyadic) -> Dyadic {
        if a.is_zero() {
            return b.clone();
        }
        if b.is_zero() {
            return a.clone();
        }
        let e = a.exp.min(b.exp);
        let ma = &a.mant << (a.exp - e) as usize;
        let mb = &b.mant << (b.exp - e) as usize;
        Dyadic::new(ma + mb, e)
    }

    pub fn add(&self, other: &Dyadic, prec: u32, dir: Round) -> Dyadic {
        if self.is_zero() {
            return other.round(prec, dir);
        }
        if other.is_zero() {
            return self.round(prec, dir);
        }
        let (big, small) = if self.top() >= other.top() { (self, other) } else { (other, self) };
        let gap = big.top() - small.top();
        if gap > prec as i64 + 64 {
            // `small` is below the rounding granularity; replace it by a
            // power of two that dominates it in the unfavourable direction.
            let sticky_exp = big.top() - prec as i64 - 32;
            let towards = match dir {
                Round::Down => small.signum() < 0,
                Round::Up => small.signum() > 0,
            };
            if !towards {
                return big.round(prec, dir);
            }
            let s = Dyadic::new(BigInt::from(small.signum()), sticky_exp);
            return Dyadic::exact_add(big, &s).round(prec, dir);
        }
        Dyadic::exact_add(self, other).round(prec, dir)
    }

    pub fn sub(&self, other: &Dyadic, prec: u32, dir: Round) -> Dyadic {
        self.add(&other.neg(), prec, dir)
    }

    pub fn mul(&self, other: &Dyadic, prec: u32, dir: Round) -> Dyadic {
        Dyadic::new(&self.mant * &other.mant, self.exp + other.exp).round(prec, dir)
    }

    /// Quotient with directed rounding; `other` must be nonzero.
    pub fn div(&self, other: &Dyadic, prec: u32, dir: Round) -> Dyadic {
        assert!(!other.is_zero(), "dyadic division by zero");
        if self.is_zero() {
            return Dyadic::zero();
        }
        let shift = (prec as i64 + other.mant.bits() as i64 - self.mant.bits() as i64 + 2).max(0);
        let n = &self.mant << shift as usize;
        let q = div_round_int(&n, &other.mant, dir);
        Dyadic::new(q, self.exp - shift - other.exp).round(prec, dir)
    }

    /// Square root of a nonnegative dyadic with directed rounding.
    pub fn sqrt(&self, prec: u32, dir: Round) -> Dyadic {
        assert!(!self.mant.is_negative(), "sqrt of negative dyadic");
        if self.is_zero() {
            return Dyadic::zero();
        }
        let want = 2 * prec as i64 + 4;
        let mut shift = (want - self.mant.bits() as i64).max(0);
        if (self.exp - shift).rem_euclid(2) != 0 {
            shift += 1;
        }
        let m = self.mant.magnitude() << shift as usize;
        let mut r = m.sqrt();
        if dir == Round::Up && &r * &r != m {
            r += 1u32;
        }
        Dyadic::new(BigInt::from(r), (self.exp - shift) / 2).round(prec, dir)
    }

    pub fn from_rational(q: &Rational, prec: u32, dir: Round) -> Dyadic {
        let n = Dyadic::new(q.numer().clone(), 0);
        let d = Dyadic::new(q.denom().clone(), 0);
        // exact when the denominator is a power of two and the mantissa fits
        if d.mant.is_one() {
            return Dyadic::new(n.mant.clone(), n.exp - d.exp).round(prec, dir);
        }
        n.div(&d, prec, dir)
    }

    pub fn to_rational(&self) -> Rational {
        if self.exp >= 0 {
            Rational::from_integer(&self.mant << self.exp as usize)
        } else {
            Rational::new(self.mant.clone(), BigInt::one() << (-self.exp) as usize)
        }
    }

    pub fn mul_pow2(&self, k: i64) -> Dyadic {
        Dyadic { mant: self.mant.clone(), exp: if self.is_zero() { 0 } else { self.exp + k } }
    }

    /// Nearest-ish `f64` (for display only).
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.mant.bits() as i64;
        let s = (bits - 60).max(0);
        let m = shr_round(&self.mant, s as u64, Round::Down);
        let mf: f64 = num_traits::ToPrimitive::to_f64(&m).unwrap_or(f64::NAN);
        let e = self.exp + s;
        if e > 2000 {
            return f64::INFINITY * mf.signum();
        }
        if e < -2000 {
            return 0.0;
        }
        mf * 2f64.powi(e as i32)
    }

    /// Floor (Down) or ceiling (Up) as an integer.
    pub fn to_int(&self, dir: Round) -> BigInt {
        if self.exp >= 0 {
            &self.mant << self.exp as usize
        } else {
            shr_round(&self.mant, (-self.exp) as u64, dir)
        }
    }

    /// Scientific decimal string with `digits` significant digits, rounded in `dir`.
    pub fn to_decimal(&self, digits: u32, dir: Round) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let neg = self.mant.is_negative();
        let mag = self.abs();
        // magnitude is rounded away from zero when dir points away from zero
        let mdir = if neg { dir.flip() } else { dir };
        let q = mag.to_rational();
        // estimate the decimal exponent from the binary one
        let mut e10 = ((mag.top() - 1) as f64 * std::f64::consts::LOG10_2).floor() as i64;
        let ten = BigInt::from(10);
        let scaled = |e10: i64| -> Rational {
            let shift = digits as i64 - 1 - e10;
            if shift >= 0 {
                &q * Rational::from_integer(num_traits::pow(ten.clone(), shift as usize))
            } else {
                &q / Rational::from_integer(num_traits::pow(ten.clone(), (-shift) as usize))
            }
        };
        let lo_bound = num_traits::pow(ten.clone(), digits as usize - 1);
        let hi_bound = num_traits::pow(ten.clone(), digits as usize);
        let mut s = scaled(e10);
        while s.to_integer() >= hi_bound {
            e10 += 1;
            s = scaled(e10);
        }
        while s.to_integer() < lo_bound {
            e10 -= 1;
            s = scaled(e10);
        }
        let mut m = match mdir {
            Round::Down => s.floor().to_integer(),
            Round::Up => s.ceil().to_integer(),
        };
        if m == hi_bound {
            m = lo_bound.clone();
            e10 += 1;
        }
        let ds = m.to_string();
        let (head, tail) = ds.split_at(1);
        let tail = tail.trim_end_matches('0');
        let body = if tail.is_empty() { head.to_string() } else { format!("{head}.{tail}") };
        format!("{}{}e{}", if neg { "-" } else { "" }, body, e10)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (sa, sb) = (self.signum(), other.signum());
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == 0 {
            return Ordering::Equal;
        }
        let (ta, tb) = (self.top(), other.top());
        if ta != tb {
            let by_mag = ta.cmp(&tb);
            return if sa > 0 { by_mag } else { by_mag.reverse() };
        }
        let e = self.exp.min(other.exp);
        let ma = &self.mant << (self.exp - e) as usize;
        let mb = &other.mant << (other.exp - e) as usize;
        ma.cmp(&mb)
    }
}

/// Closed real interval `[lo, hi]` with dyadic endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: Dyadic,
    pub hi: Dyadic,
}

impl Interval {
    pub fn point(d: Dyadic) -> Self {
        Interval { lo: d.clone(), hi: d }
    }

    pub fn new(lo: Dyadic, hi: Dyadic) -> Self {
        debug_assert!(lo <= hi);
        Interval { lo, hi }
    }

    pub fn zero() -> Self {
        Interval::point(Dyadic::zero())
    }

    pub fn from_int(n: i64) -> Self {
        Interval::point(Dyadic::from_int(n))
    }

    pub fn from_rational(q: &Rational, prec: u32) -> Self {
        Interval {
            lo: Dyadic::from_rational(q, prec, Round::Down),
            hi: Dyadic::from_rational(q, prec, Round::Up),
        }
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.lo.signum() <= 0 && self.hi.signum() >= 0
    }

    pub fn contains(&self, q: &Rational) -> bool {
        self.lo.to_rational() <= *q && *q <= self.hi.to_rational()
    }

    pub fn width(&self) -> Dyadic {
        self.hi.sub(&self.lo, 64, Round::Up)
    }

    pub fn neg(&self) -> Interval {
        Interval { lo: self.hi.neg(), hi: self.lo.neg() }
    }

    pub fn add(&self, o: &Interval, prec: u32) -> Interval {
        Interval { lo: self.lo.add(&o.lo, prec, Round::Down), hi: self.hi.add(&o.hi, prec, Round::Up) }
    }

    pub fn sub(&self, o: &Interval, prec: u32) -> Interval {
        self.add(&o.neg(), prec)
    }

    pub fn mul(&self, o: &Interval, prec: u32) -> Interval {
        let cands = [(&self.lo, &o.lo), (&self.lo, &o.hi), (&self.hi, &o.lo), (&self.hi, &o.hi)];
        let lo = cands.iter().map(|(a, b)| a.mul(b, prec, Round::Down)).min().unwrap();
        let hi = cands.iter().map(|(a, b)| a.mul(b, prec, Round::Up)).max().unwrap();
        Interval { lo, hi }
    }

    pub fn scale_rational(&self, q: &Rational, prec: u32) -> Interval {
        self.mul(&Interval::from_rational(q, prec), prec)
    }

    /// Square, tight for intervals straddling zero.
    pub fn sqr(&self, prec: u32) -> Interval {
        if self.contains_zero() {
            let m = self.lo.abs().max(self.hi.abs());
            Interval { lo: Dyadic::zero(), hi: m.mul(&m, prec, Round::Up) }
        } else {
            let a = self.abs();
            Interval { lo: a.lo.mul(&a.lo, prec, Round::Down), hi: a.hi.mul(&a.hi, prec, Round::Up) }
        }
    }

    pub fn abs(&self) -> Interval {
        if self.lo.signum() >= 0 {
            self.clone()
        } else if self.hi.signum() <= 0 {
            self.neg()
        } else {
            Interval { lo: Dyadic::zero(), hi: self.lo.abs().max(self.hi.abs()) }
        }
    }

    /// `None` when the divisor contains zero.
    pub fn div(&self, o: &Interval, prec: u32) -> Option<Interval> {
        if o.contains_zero() {
            return None;
        }
        let cands = [(&self.lo, &o.lo), (&self.lo, &o.hi), (&self.hi, &o.lo), (&self.hi, &o.hi)];
        let lo = cands.iter().map(|(a, b)| a.div(b, prec, Round::Down)).min().unwrap();
        let hi = cands.iter().map(|(a, b)| a.div(b, prec, Round::Up)).max().unwrap();
        Some(Interval { lo, hi })
    }

    /// Square root; negative parts of the lower endpoint are clamped to zero.
    pub fn sqrt(&self, prec: u32) -> Interval {
        let lo = if self.lo.signum() <= 0 { Dyadic::zero() } else { self.lo.sqrt(prec, Round::Down) };
        Interval { lo, hi: self.hi.sqrt(prec, Round::Up) }
    }

    pub fn max(&self, o: &Interval) -> Interval {
        Interval { lo: self.lo.clone().max(o.lo.clone()), hi: self.hi.clone().max(o.hi.clone()) }
    }

    pub fn hull(&self, o: &Interval) -> Interval {
        Interval { lo: self.lo.clone().min(o.lo.clone()), hi: self.hi.clone().max(o.hi.clone()) }
    }

    /// Certified `self < o`: `Some(true)`, `Some(false)` or `None` (overlap).
    pub fn lt(&self, o: &Interval) -> Option<bool> {
        if self.hi < o.lo {
            Some(true)
        } else if self.lo >= o.hi {
            Some(false)
        } else {
            None
        }
    }

    /// Certified `self <= o`.
    pub fn le(&self, o: &Interval) -> Option<bool> {
        if self.hi <= o.lo {
            Some(true)
        } else if self.lo > o.hi {
            Some(false)
        } else {
            None
        }
    }

    /// Certified sign: `Some(-1 | 0 | 1)`; zero only for the point interval 0.
    pub fn sign(&self) -> Option<i32> {
        if self.lo.signum() > 0 {
            Some(1)
        } else if self.hi.signum() < 0 {
            Some(-1)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(0)
        } else {
            None
        }
    }

    pub fn to_decimal_pair(&self, digits: u32) -> [String; 2] {
        [self.lo.to_decimal(digits, Round::Down), self.hi.to_decimal(digits, Round::Up)]
    }

    pub fn mid_f64(&self) -> f64 {
        (self.lo.to_f64() + self.hi.to_f64()) / 2.0
    }
}

/// Rectangular complex interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexInterval {
    pub re: Interval,
    pub im: Interval,
}

impl ComplexInterval {
    pub fn real(re: Interval) -> Self {
        ComplexInterval { re, im: Interval::zero() }
    }

    pub fn zero() -> Self {
        ComplexInterval::real(Interval::zero())
    }

    pub fn one() -> Self {
        ComplexInterval::real(Interval::from_int(1))
    }

    pub fn add(&self, o: &Self, prec: u32) -> Self {
        ComplexInterval { re: self.re.add(&o.re, prec), im: self.im.add(&o.im, prec) }
    }

    pub fn sub(&self, o: &Self, prec: u32) -> Self {
        ComplexInterval { re: self.re.sub(&o.re, prec), im: self.im.sub(&o.im, prec) }
    }

    pub fn mul(&self, o: &Self, prec: u32) -> Self {
        let re = self.re.mul(&o.re, prec).sub(&self.im.mul(&o.im, prec), prec);
        let im = self.re.mul(&o.im, prec).add(&self.im.mul(&o.re, prec), prec);
        ComplexInterval { re, im }
    }

    pub fn scale(&self, r: &Interval, prec: u32) -> Self {
        ComplexInterval { re: self.re.mul(r, prec), im: self.im.mul(r, prec) }
    }

    pub fn norm_sq(&self, prec: u32) -> Interval {
        self.re.sqr(prec).add(&self.im.sqr(prec), prec)
    }

    pub fn abs(&self, prec: u32) -> Interval {
        if self.im.is_point() && self.im.lo.is_zero() {
            return self.re.abs();
        }
        if self.re.is_point() && self.re.lo.is_zero() {
            return self.im.abs();
        }
        self.norm_sq(prec).sqrt(prec)
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    /// `None` when the divisor may vanish.
    pub fn div(&self, o: &Self, prec: u32) -> Option<Self> {
        let n = o.norm_sq(prec);
        if n.contains_zero() {
            return None;
        }
        let conj = ComplexInterval { re: o.re.clone(), im: o.im.neg() };
        let t = self.mul(&conj, prec);
        Some(ComplexInterval { re: t.re.div(&n, prec)?, im: t.im.div(&n, prec)? })
    }

    pub fn powu(&self, mut k: u64, prec: u32) -> Self {
        let mut base = self.clone();
        let mut acc = ComplexInterval::one();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base, prec);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base, prec);
            }
        }
        acc
    }
}

const GUARD: u32 = 24;

/// Sum of an alternating series with terms decreasing in magnitude: the
/// limit lies between consecutive partial sums.
fn alternating_sum(terms: &[Interval], prec: u32) -> Interval {
    let mut s = Interval::zero();
    for (i, t) in terms.iter().enumerate() {
        s = if i % 2 == 0 { s.add(t, prec) } else { s.sub(t, prec) };
    }
    s
}

fn pow2_interval(k: i64) -> Interval {
    Interval::point(Dyadic::new(BigInt::one(), k))
}

/// `atan(1/x)` for an integer `x >= 2`.
fn atan_inv(x: u64, prec: u32) -> Interval {
    let wp = prec + GUARD;
    let xq = Rational::from_integer(BigInt::from(x));
    let mut terms = Vec::new();
    let mut pw = xq.clone();
    let x2 = &xq * &xq;
    let mut k = 0u64;
    loop {
        let t = Rational::new(BigInt::one(), BigInt::from(2 * k + 1)) / &pw;
        let ti = Interval::from_rational(&t, wp);
        let small = ti.hi < Dyadic::new(BigInt::one(), -(wp as i64) - 4);
        terms.push(ti);
        if small {
            break;
        }
        pw = &pw * &x2;
        k += 1;
    }
    // the omitted tail is bounded by the last (included) term; widen by it
    let last = terms.last().unwrap().clone();
    let s = alternating_sum(&terms[..terms.len() - 1], wp);
    Interval { lo: s.lo.sub(&last.hi, wp, Round::Down), hi: s.hi.add(&last.hi, wp, Round::Up) }
}

/// Enclosure of pi (Machin's formula).
pub fn pi(prec: u32) -> Interval {
    let wp = prec + GUARD;
    let a = atan_inv(5, wp).scale_rational(&Rational::from_integer(16.into()), wp);
    let b = atan_inv(239, wp).scale_rational(&Rational::from_integer(4.into()), wp);
    a.sub(&b, wp)
}

/// cos and sin of `t` for `0 <= t <= 1`, Taylor series with remainder bound.
fn cos_sin_small(t: &Interval, prec: u32) -> (Interval, Interval) {
    let wp = prec + GUARD;
    if t.is_point() && t.lo.is_zero() {
        return (Interval::from_int(1), Interval::zero());
    }
    let mut cos_terms = Vec::new();
    let mut sin_terms = Vec::new();
    let mut term = Interval::from_int(1); // t^k / k!
    let mut k = 0u64;
    let eps = Dyadic::new(BigInt::one(), -(wp as i64) - 4);
    loop {
        if k % 2 == 0 {
            cos_terms.push(term.clone());
        } else {
            sin_terms.push(term.clone());
        }
        if term.hi < eps && k > 2 {
            break;
        }
        k += 1;
        term = term.mul(t, wp).div(&Interval::from_int(k as i64), wp).unwrap();
    }
    // remainder after the terms kept is at most the next term, itself < eps
    let tail = Interval { lo: eps.neg(), hi: eps.clone() };
    let c = alternating_sum(&cos_terms, wp).add(&tail, wp);
    let s = alternating_sum(&sin_terms, wp).add(&tail, wp);
    (c, s)
}

/// Enclosure of `(cos 2*pi*r, sin 2*pi*r)` for rational `r`, exact at multiples of 1/4.
pub fn cos_sin_turns(r: &Rational, prec: u32) -> (Interval, Interval) {
    let wp = prec + GUARD;
    let frac = r - r.floor();
    let s = &frac * Rational::from_integer(8.into());
    let octant = s.floor().to_integer();
    let f = &s - Rational::from_integer(octant.clone());
    let o: i64 = num_traits::ToPrimitive::to_i64(&octant).unwrap();
    let u = if o % 2 == 0 { f } else { Rational::one() - f };
    let t = if u.is_zero() {
        Interval::zero()
    } else {
        pi(wp).scale_rational(&(u / Rational::from_integer(4.into())), wp)
    };
    let (c, sn) = cos_sin_small(&t, wp);
    let (cos, sin) = match o {
        0 => (c, sn),
        1 => (sn, c),
        2 => (sn.neg(), c),
        3 => (c.neg(), sn),
        4 => (c.neg(), sn.neg()),
        5 => (sn.neg(), c.neg()),
        6 => (sn, c.neg()),
        _ => (c, sn.neg()),
    };
    (clamp_unit(cos), clamp_unit(sin))
}

fn clamp_unit(i: Interval) -> Interval {
    let one = Dyadic::from_int(1);
    let lo = i.lo.max(one.neg());
    let hi = i.hi.min(one);
    Interval { lo, hi }
}

/// `2 * atanh(z)` for rational `|z| <= 1/3`; equals `ln((1+z)/(1-z))`.
fn two_atanh(z: &Rational, prec: u32) -> Interval {
    let wp = prec + GUARD;
    if z.is_zero() {
        return Interval::zero();
    }
    let zi = Interval::from_rational(z, wp);
    let z2 = zi.sqr(wp);
    let mut pw = zi.clone();
    let mut sum = Interval::zero();
    let mut k = 0i64;
    let eps = Dyadic::new(BigInt::one(), -(wp as i64) - 4);
    loop {
        let t = pw.div(&Interval::from_int(2 * k + 1), wp).unwrap();
        sum = sum.add(&t, wp);
        if t.abs().hi < eps {
            break;
        }
        pw = pw.mul(&z2, wp);
        k += 1;
    }
    // tail: |z|^{2k+3}/(2k+3)/(1-z^2) <= 2 |next term| <= 2 eps
    let e2 = eps.mul_pow2(1);
    let sum = Interval { lo: sum.lo.sub(&e2, wp, Round::Down), hi: sum.hi.add(&e2, wp, Round::Up) };
    sum.mul(&Interval::from_int(2), wp)
}

pub fn ln2(prec: u32) -> Interval {
    two_atanh(&Rational::new(1.into(), 3.into()), prec)
}

/// Natural logarithm of a positive rational.
pub fn ln(q: &Rational, prec: u32) -> Interval {
    assert!(q.is_positive(), "ln of nonpositive rational");
    let wp = prec + GUARD;
    if q.is_one() {
        return Interval::zero();
    }
    // q = 2^k * y with y in [2/3, 4/3]
    let nb = q.numer().bits() as i64;
    let db = q.denom().bits() as i64;
    let mut k = nb - db;
    let two = Rational::from_integer(2.into());
    let pow2 = |k: i64| crate::rational::pow_i(&two, k);
    let lo = Rational::new(2.into(), 3.into());
    let hi = Rational::new(4.into(), 3.into());
    let mut y = q / pow2(k);
    while y > hi {
        k += 1;
        y = q / pow2(k);
    }
    while y < lo {
        k -= 1;
        y = q / pow2(k);
    }
    let z = (&y - Rational::one()) / (&y + Rational::one());
    let ly = two_atanh(&z, wp);
    let l2 = ln2(wp).mul(&Interval::from_int(k), wp);
    ly.add(&l2, wp)
}

pub fn ln_u64(n: u64, prec: u32) -> Interval {
    ln(&Rational::from_integer(BigInt::from(n)), prec)
}

/// Smallest power of two `>= x` as a dyadic interval bound helper.
pub fn two_pow(k: i64) -> Interval {
    pow2_interval(k)
}

/// Integer `n` as a big unsigned for convenience in callers.
pub fn biguint(n: u64) -> BigUint {
    BigUint::from(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn close(i: &Interval, x: f64, tol: f64) -> bool {
        (i.lo.to_f64() - x).abs() < tol && (i.hi.to_f64() - x).abs() < tol
    }

    #[test]
    fn rounding_directions() {
        let third = rat(1, 3);
        let i = Interval::from_rational(&third, 64);
        assert!(i.contains(&third));
        assert!(!i.is_point());
        let neg = Interval::from_rational(&rat(-1, 3), 64);
        assert!(neg.contains(&rat(-1, 3)));
        let exact = Interval::from_rational(&rat(3, 8), 64);
        assert!(exact.is_point());
    }

    #[test]
    fn pi_and_logs() {
        let p = pi(200);
        assert!(p.lo.to_rational() < rat(314159265358979324, 100000000000000000));
        assert!(p.hi.to_rational() > rat(314159265358979323, 100000000000000000));
        assert!(p.width() < Dyadic::new(1.into(), -190));
        assert!(close(&ln2(128), std::f64::consts::LN_2, 1e-15));
        assert!(close(&ln_u64(2016, 128), 2016f64.ln(), 1e-12));
        assert!(close(&ln(&rat(1, 10), 128), 0.1f64.ln(), 1e-14));
        assert!(ln_u64(1, 64).is_point());
    }

    #[test]
    fn trig_exact_quarters_and_values() {
        let (c, s) = cos_sin_turns(&rat(1, 4), 128);
        assert!(c.is_point() && c.lo.is_zero());
        assert_eq!(s, Interval::from_int(1));
        let (c, s) = cos_sin_turns(&rat(1, 2), 128);
        assert_eq!(c, Interval::from_int(-1));
        assert!(s.lo.is_zero() && s.hi.is_zero());
        for k in 0..24 {
            let r = rat(k, 24);
            let (c, s) = cos_sin_turns(&r, 128);
            let th = 2.0 * std::f64::consts::PI * k as f64 / 24.0;
            assert!(close(&c, th.cos(), 1e-14), "cos {k}");
            assert!(close(&s, th.sin(), 1e-14), "sin {k}");
            let n = ComplexInterval { re: c, im: s }.norm_sq(128);
            assert!(n.contains(&int(1)));
        }
    }

    #[test]
    fn huge_exponent_add_is_sound() {
        let big = Dyadic::new(1.into(), 10_000);
        let tiny = Dyadic::new(1.into(), -10_000);
        let lo = big.add(&tiny, 64, Round::Down);
        let hi = big.add(&tiny, 64, Round::Up);
        assert!(lo <= big && hi > big);
        let lo = big.sub(&tiny, 64, Round::Down);
        assert!(lo < big);
    }

    #[test]
    fn sqrt_and_decimal() {
        let two = Interval::from_int(2).sqrt(100);
        assert!(close(&two, std::f64::consts::SQRT_2, 1e-15));
        assert!(two.lo.to_rational() * two.lo.to_rational() <= int(2));
        assert!(two.hi.to_rational() * two.hi.to_rational() >= int(2));
        assert_eq!(Dyadic::from_int(65536).to_decimal(20, Round::Down), "6.5536e4");
        let pair = two.to_decimal_pair(10);
        assert_eq!(pair, ["1.414213562e0".to_string(), "1.414213563e0".to_string()]);
        let big = Dyadic::new(1.into(), 4000);
        let s = big.to_decimal(5, Round::Up);
        assert!(s.ends_with("e1204"), "{s}");
    }
}
